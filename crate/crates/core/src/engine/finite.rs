use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Complex, Float};

use super::{check_exponent, LValue, Method};
use crate::error::{invalid, Result};
use crate::hfun::{h_at_root, h_rational, Bounded};
use crate::numeric::{abs_upper, factorial, pi, pow2, Precision};
use crate::symfn::{make_chi_2m, make_f_4m, SymmetricFunction};

/// Σ_{a in residues} χ(a)·h_r(ζ_N^a) with an absolute error bound.
///
/// Kernel values are computed in parallel; the reduction runs in residue
/// order so the result does not depend on the thread count.
fn weighted_kernel_sum(
    f: &SymmetricFunction,
    r: u32,
    residues: impl Iterator<Item = u32>,
    prec: Precision,
) -> Result<(Complex, Float, u64)> {
    let n = u64::from(f.modulus());
    let h = h_rational(r)?;
    let active: Vec<u32> = residues.filter(|&a| !f.value(a).is_zero()).collect();
    let terms: Vec<Bounded> = active
        .par_iter()
        .map(|&a| h_at_root(&h, u64::from(a), n, prec))
        .collect::<Result<_>>()?;

    let w = terms.iter().map(|b| b.value.prec().0).max().unwrap_or(prec.bits() + 32);
    let mut sum = Complex::with_val(w, 0);
    let mut err = Float::with_val(64, 0);
    let mut magnitude = Float::with_val(64, 0);
    for (&a, term) in active.iter().zip(&terms) {
        let coeff = f.value(a);
        let c = coeff.to_complex(w);
        sum += Complex::with_val(w, &c * &term.value);
        let ca = coeff.abs_upper();
        err += Float::with_val(64, &ca * &term.error);
        magnitude += Float::with_val(64, &ca * &abs_upper(&term.value));
    }
    // conversion of χ(a), one product and one addition per term
    let mut rounding = magnitude;
    rounding *= 8 * (active.len() as u64 + 2);
    rounding *= pow2(1 - w as i32);
    err += rounding;
    err.next_up();
    Ok((sum, err, active.len() as u64))
}

/// (-i)^r, i^r helpers as (re, im) unit pairs.
fn i_power(r: u32) -> (i32, i32) {
    match r % 4 {
        0 => (1, 0),
        1 => (0, 1),
        2 => (-1, 0),
        _ => (0, -1),
    }
}

/// Scale `sum` (with error `err`) by `magnitude · i^k`, adding the rounding
/// of the scaling step.
fn scale(
    sum: Complex,
    err: Float,
    magnitude: Float,
    unit: (i32, i32),
    terms: u64,
    method: Method,
    prec: Precision,
) -> LValue {
    let w = sum.prec().0;
    let phase = Complex::with_val(w, unit);
    let factor = Complex::with_val(w, &phase * &magnitude);
    let value = Complex::with_val(w, &sum * &factor);
    let mut mag64 = Float::with_val(64, &magnitude);
    mag64 *= 1.000_001;
    let mut bound = err * &mag64;
    let mut rounding = abs_upper(&value);
    rounding *= 16;
    rounding *= pow2(1 - w as i32);
    bound += rounding;
    bound.next_up();
    LValue {
        value,
        error_bound: bound,
        method,
        terms_used: terms,
        precision: prec,
    }
}

/// L(r, χ) as `(1/2)·(1/(r-1)!)·(-2πi/N)^r · Σ_{a=1}^{N-1} χ(a)·h_r(ζ_N^a)`.
pub fn l_theorem23(f: &SymmetricFunction, r: u32, prec: Precision) -> Result<LValue> {
    check_exponent(f, r)?;
    let n = f.modulus();
    let (sum, err, terms) = weighted_kernel_sum(f, r, 1..n, prec)?;
    let w = sum.prec().0;
    // |(-2πi/N)^r| / (2 (r-1)!)
    let base = Float::with_val(w, pi(w) * 2u32) / n;
    let magnitude = Float::with_val(w, base.pow(r)) / Float::with_val(w, factorial(r - 1)) / 2u32;
    // (-i)^r = conj(i^r)
    let (re, im) = i_power(r);
    Ok(scale(sum, err, magnitude, (re, -im), terms, Method::FullSum, prec))
}

/// The half-length sum for N = 2q and r = 2p+1:
/// `(-1)^{p+1}/(r-1)! · π^r·i/q^r · Σ_{a=1}^{q-1} χ(a)·h_r(ζ_{2q}^a)`.
pub fn l_half_sum(f: &SymmetricFunction, r: u32, prec: Precision) -> Result<LValue> {
    check_exponent(f, r)?;
    let n = f.modulus();
    if !n.is_multiple_of(2) {
        return invalid(format!("half_sum needs an even modulus, got {n}"));
    }
    if r.is_multiple_of(2) {
        return invalid(format!("half_sum needs odd r, got {r}"));
    }
    let q = n / 2;
    let p = (r - 1) / 2;
    let (sum, err, terms) = weighted_kernel_sum(f, r, 1..q, prec)?;
    let w = sum.prec().0;
    let base = Float::with_val(w, pi(w)) / q;
    let magnitude = Float::with_val(w, base.pow(r)) / Float::with_val(w, factorial(r - 1));
    let sign = if p % 2 == 1 { 1 } else { -1 }; // (-1)^{p+1}
    Ok(scale(sum, err, magnitude, (0, sign), terms, Method::HalfSum, prec))
}

/// Residual of `L(r, f_{4m}) = L(r, χ_{4m}) - 2^{-r}·L(r, χ_{2m})`, each side
/// evaluated with the half-length sum.
#[derive(Debug, Clone)]
pub struct SplitResidual {
    pub residual: Float,
    pub bound: Float,
}

impl SplitResidual {
    pub fn holds(&self) -> bool {
        self.residual <= self.bound
    }
}

pub fn split_residual(m: u32, r: u32, prec: Precision) -> Result<SplitResidual> {
    if m < 2 {
        return invalid(format!("the odd-support split needs m >= 2, got {m}"));
    }
    if r < 3 || r.is_multiple_of(2) {
        return invalid(format!("the odd-support split needs odd r >= 3, got {r}"));
    }
    let f = l_half_sum(&make_f_4m(m)?, r, prec)?;
    let chi_4m = l_half_sum(&make_chi_2m(2 * m)?, r, prec)?;
    let chi_2m = l_half_sum(&make_chi_2m(m)?, r, prec)?;
    let w = f.value.prec().0.max(chi_4m.value.prec().0).max(chi_2m.value.prec().0);
    let scaled = Complex::with_val(w, &chi_2m.value >> r);
    let mut d = Complex::with_val(w, &f.value - &chi_4m.value);
    d += scaled;
    let mut bound = Float::with_val(64, &f.error_bound + &chi_4m.error_bound);
    bound += Float::with_val(64, &chi_2m.error_bound >> r);
    bound += abs_upper(&d) * pow2(4 - w as i32);
    bound.next_up();
    Ok(SplitResidual {
        residual: abs_upper(&d),
        bound,
    })
}

//! Direct partial summation of `Σ χ(n)/n^r`, the independent oracle for
//! every other method.

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Complex, Float, Integer};

use super::{check_exponent, LValue, Method};
use crate::error::{invalid, Error, Result};
use crate::numeric::{ceil_log2, pow2, Precision};
use crate::symfn::SymmetricFunction;

/// Default cap on the number of terms summed by [`l_direct`].
pub const DEFAULT_TERM_BUDGET: u64 = 1_000_000_000;

/// Periods per parallel chunk; fixed so the reduction order never depends
/// on the thread count.
const BLOCKS_PER_CHUNK: u64 = 256;

/// Tail bound `max|χ|·M^{1-r}/(r-1)` for the terms after `M`.
fn tail_bound(max_abs: &Float, r: u32, m: u64) -> Float {
    let mut t = Float::with_val(64, m);
    t.next_down();
    let mut t = t.pow(1 - r as i32);
    t.next_up();
    t *= max_abs;
    t /= r - 1;
    t.next_up();
    t
}

/// Smallest M whose tail bound is at most `tol`.
fn choose_terms(max_abs: &Float, r: u32, tol: &Float, budget: u64) -> Result<u64> {
    if max_abs.is_zero() {
        return Ok(1);
    }
    let ratio = Float::with_val(64, max_abs / tol) / (r - 1);
    let estimate = ratio.to_f64().powf(1.0 / f64::from(r - 1)).ceil();
    if !estimate.is_finite() || estimate > budget as f64 {
        return Err(Error::Infeasible(format!(
            "direct summation to tolerance {:e} needs about {estimate:e} terms, budget is {budget}",
            tol.to_f64()
        )));
    }
    let mut m = (estimate as u64).max(1);
    while tail_bound(max_abs, r, m) > *tol {
        m += 1;
        if m > budget {
            return Err(Error::Infeasible(format!(
                "direct summation exceeds the {budget}-term budget"
            )));
        }
    }
    Ok(m)
}

/// Coefficients as floats at `w` bits, indexed by residue (index 0 is χ(0) = 0).
fn coefficient_table(f: &SymmetricFunction, w: u32) -> Vec<Option<Complex>> {
    let mut table = vec![None];
    table.extend(f.values().iter().map(|v| (!v.is_zero()).then(|| v.to_complex(w))));
    table
}

/// Σ_{n=lo}^{hi} χ(n)/n^r in increasing n.
fn range_sum(table: &[Option<Complex>], r: u32, lo: u64, hi: u64, w: u32) -> Complex {
    let n_mod = table.len() as u64;
    let mut acc = Complex::with_val(w, 0);
    for n in lo..=hi {
        if let Some(c) = &table[(n % n_mod) as usize] {
            let power = Integer::from(n).pow(r);
            let inv = Float::with_val(w, &power).recip();
            acc += Complex::with_val(w, c * &inv);
        }
    }
    acc
}

/// Partial sum through M = smallest count with tail bound <= `tolerance`.
pub fn l_direct(f: &SymmetricFunction, r: u32, tolerance: &Float) -> Result<LValue> {
    l_direct_with_budget(f, r, tolerance, DEFAULT_TERM_BUDGET)
}

pub fn l_direct_with_budget(f: &SymmetricFunction, r: u32, tolerance: &Float, budget: u64) -> Result<LValue> {
    check_exponent(f, r)?;
    if !(tolerance.is_finite() && *tolerance > 0) {
        return invalid("direct tolerance must be positive");
    }
    let max_abs = f.max_abs();
    let m = choose_terms(&max_abs, r, tolerance, budget)?;

    // Enough bits that accumulated rounding stays far below the tolerance.
    let tol_bits = (-tolerance.to_f64().log2()).ceil().max(0.0) as u32;
    let w = (tol_bits + ceil_log2(m) + 32).max(96);
    let table = coefficient_table(f, w);
    let period = u64::from(f.modulus());

    let chunk_len = period * BLOCKS_PER_CHUNK;
    let chunks = m.div_ceil(chunk_len);
    let partials: Vec<Complex> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let lo = k * chunk_len + 1;
            let hi = ((k + 1) * chunk_len).min(m);
            range_sum(&table, r, lo, hi, w)
        })
        .collect();
    let mut value = Complex::with_val(w, 0);
    for p in &partials {
        value += p;
    }

    // Σ|terms| <= max|χ|·ζ(r) <= 2·max|χ|; each term and each addition
    // contributes a few ulps.
    let mut rounding = Float::with_val(64, &max_abs);
    rounding *= 16 * (m + chunks + 2);
    rounding *= pow2(1 - w as i32);
    let mut bound = tail_bound(&max_abs, r, m);
    bound += rounding;
    bound.next_up();
    Ok(LValue {
        value,
        error_bound: bound,
        method: Method::Direct,
        terms_used: m,
        precision: Precision::new(w.max(64))?,
    })
}

/// Per-period block sums `Σ_{a=1}^{N-1} χ(a)/(kN+a)^r` for k = 0..blocks.
pub fn direct_blocks(f: &SymmetricFunction, r: u32, blocks: u64, prec: Precision) -> Result<Vec<Complex>> {
    check_exponent(f, r)?;
    let w = prec.with_guard(32);
    let table = coefficient_table(f, w);
    let n = u64::from(f.modulus());
    Ok((0..blocks)
        .map(|k| range_sum(&table, r, k * n + 1, (k + 1) * n - 1, w))
        .collect())
}

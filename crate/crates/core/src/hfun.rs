//! The auxiliary kernels h_r(t).
//!
//! `h_1(t) = (1+t) / (2(1-t))` and `h_{r+1} = t·d/dt h_r`. Every h_r is a
//! rational function `P_r(t) / (2(1-t)^r)` with `P_1 = 1 + t`; the numerators
//! satisfy `P_{r+1}(t) = t·((1-t)·P_r'(t) + r·P_r(t))`.
//!
//! Three independent evaluation routes are provided:
//! * [`h_eval`] evaluates the exact rational form,
//! * [`h_trig`] uses the closed trigonometric forms for r <= 5,
//! * [`h_series`] sums the bilateral series `Σ_n (x+n)^{-r}` with a tail bound.

use rug::float::Round;
use rug::ops::Pow;
use rug::{Complex, Float, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numeric::{abs_upper, ceil_log2, factorial, log2_factorial_ceil, pi, pow2, Precision};

/// Default cap on numerator coefficient size, in bits.
pub const DEFAULT_COEFF_BUDGET_BITS: u32 = 512;

/// Truncation radius cap for [`default_truncation`].
pub const MAX_SERIES_RADIUS: u64 = 10_000_000;

/// Exact rational form of h_r: `numerator(t) / (2·(1-t)^order)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HRational {
    order: u32,
    /// `numerator[k]` is the coefficient of t^k.
    numerator: Vec<Rational>,
}

impl HRational {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn numerator(&self) -> &[Rational] {
        &self.numerator
    }

    pub fn degree(&self) -> usize {
        self.numerator.iter().rposition(|c| c.cmp0().is_ne()).unwrap_or(0)
    }

    /// Apply `t·d/dt` once.
    fn raise(&self) -> HRational {
        let r = self.order;
        let p = &self.numerator;
        // q(t) = (1-t)·p'(t) + r·p(t), then multiply by t.
        let mut q = vec![Rational::new(); p.len() + 1];
        for (k, c) in p.iter().enumerate() {
            if k >= 1 {
                let d = Rational::from(c * k as u32);
                q[k - 1] += &d;
                q[k] -= &d;
            }
            q[k] += Rational::from(c * r);
        }
        let mut numerator = Vec::with_capacity(q.len() + 1);
        numerator.push(Rational::new());
        numerator.extend(q);
        while numerator.len() > 1 && numerator.last().is_some_and(|c| c.cmp0().is_eq()) {
            numerator.pop();
        }
        HRational {
            order: r + 1,
            numerator,
        }
    }

    fn max_coeff_bits(&self) -> u32 {
        self.numerator
            .iter()
            .map(|c| c.numer().significant_bits().max(c.denom().significant_bits()))
            .max()
            .unwrap_or(0)
    }

    /// Σ |c_k|, an upper bound for |P(t)| on the closed unit disc.
    pub fn coeff_abs_sum(&self) -> Rational {
        self.numerator.iter().map(|c| c.clone().abs()).sum()
    }

    /// Exact value at a rational point t != 1.
    pub fn eval_rational(&self, t: &Rational) -> Result<Rational> {
        if *t == 1 {
            return Err(Error::Pole);
        }
        let mut acc = Rational::new();
        for c in self.numerator.iter().rev() {
            acc *= t;
            acc += c;
        }
        let one_minus = Rational::from(1 - t);
        let den = Rational::from(2) * one_minus.pow(self.order as i32);
        Ok(acc / den)
    }
}

/// JSON dump: `{order, numerator: [[num, den], ...]}` with decimal strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HRationalJson {
    pub order: u32,
    pub numerator: Vec<[String; 2]>,
}

impl From<&HRational> for HRationalJson {
    fn from(h: &HRational) -> Self {
        HRationalJson {
            order: h.order,
            numerator: h
                .numerator
                .iter()
                .map(|c| [c.numer().to_string(), c.denom().to_string()])
                .collect(),
        }
    }
}

/// h_r as an exact rational function, with the default coefficient budget.
pub fn h_rational(r: u32) -> Result<HRational> {
    h_rational_with_budget(r, DEFAULT_COEFF_BUDGET_BITS)
}

pub fn h_rational_with_budget(r: u32, max_coeff_bits: u32) -> Result<HRational> {
    if r < 1 {
        return invalid("h_r needs r >= 1");
    }
    let mut h = HRational {
        order: 1,
        numerator: vec![Rational::from(1), Rational::from(1)],
    };
    while h.order < r {
        h = h.raise();
        if h.max_coeff_bits() > max_coeff_bits {
            return Err(Error::Infeasible(format!(
                "h_{} numerator coefficients exceed the {max_coeff_bits}-bit budget",
                h.order
            )));
        }
    }
    Ok(h)
}

/// Guard bits for evaluating h_r within distance ~1/n of the pole.
pub fn guard_bits(r: u32, n: u64) -> u32 {
    32 + log2_factorial_ceil(r) + 4 * ceil_log2(n.max(2))
}

/// A value together with an absolute error bound.
#[derive(Debug, Clone)]
pub struct Bounded {
    pub value: Complex,
    pub error: Float,
}

/// Evaluate `P/(2·(1-t)^r)` given `t` and `1 - t` at working precision `w`.
///
/// `x_error` is an upper bound on |Δx| when t was produced as e^{2πix} from
/// a rounded x; it is propagated through |dh/dx| = 2π|h_{r+1}|.
fn eval_form(h: &HRational, t: &Complex, one_minus_t: &Complex, w: u32, x_error: Option<&Float>) -> Bounded {
    let r = h.order;
    let mut acc = Complex::with_val(w, 0);
    for c in h.numerator.iter().rev() {
        acc *= t;
        acc += Complex::with_val(w, (c, 0));
    }
    let denom = Complex::with_val(w, one_minus_t.pow(r)) * 2u32;
    let value = Complex::with_val(w, &acc / &denom);

    // Rounding analysis with unit roundoff u = 2^(1-w).
    let u = pow2(1 - w as i32);
    let s = Float::with_val(64, h.coeff_abs_sum().to_f64() * 1.000_001);
    // lower bound on |1 - t|
    let mut d = Float::with_val_round(64, one_minus_t.abs_ref(), Round::Down).0;
    d *= 1.0 - 1e-9;
    let dr = Float::with_val(64, (&d).pow(r));
    let t_abs = abs_upper(t).max(&Float::with_val(64, 1));
    let tr = Float::with_val(64, (&t_abs).pow(h.numerator.len() as u32));

    let mut err = Float::with_val(64, &s * &tr);
    err *= &u;
    err *= 4 * (r + 2);
    err /= Float::with_val(64, &dr * 2u32);
    let mut rel = abs_upper(&value);
    rel *= &u;
    rel *= 4 * (r + 3);
    err += rel;
    if let Some(dx) = x_error {
        // |h_{r+1}| <= (r+1)·S / (2 d^{r+1})
        let mut e = Float::with_val(64, &s * (r + 1));
        e *= 2.0 * std::f64::consts::PI * 1.000_001;
        e *= dx;
        e /= Float::with_val(64, &dr * &d) * 2u32;
        err += e;
    }
    err.next_up();
    Bounded { value, error: err }
}

/// h_r(t) for an arbitrary complex `t != 1`.
///
/// The working precision adds guard bits scaled by how close t is to the
/// pole; the result carries those extra bits.
pub fn h_eval(r: u32, t: &Complex, prec: Precision) -> Result<Complex> {
    Ok(h_eval_bounded(r, t, prec)?.value)
}

pub fn h_eval_bounded(r: u32, t: &Complex, prec: Precision) -> Result<Bounded> {
    let h = h_rational(r)?;
    let probe = Complex::with_val(t.prec().0.max(64), 1 - t);
    if probe.real().is_zero() && probe.imag().is_zero() {
        return Err(Error::Pole);
    }
    let dist = probe.abs().real().to_f64();
    let near = if dist > 0.0 {
        (1.0 / dist).ceil().min(1e18) as u64
    } else {
        u64::MAX
    };
    let w = prec.with_guard(guard_bits(r, near));
    // t may carry fewer bits than w; 1 - t is then exact at w bits.
    let tw = Complex::with_val(w, t);
    let one_minus = Complex::with_val(w, 1 - &tw);
    Ok(eval_form(&h, &tw, &one_minus, w, None))
}

/// h_r(e^{2πix}) for real x not an integer, with 1 - t formed as
/// `-2i·sin(πx)·e^{iπx}` to avoid cancellation near the pole.
pub fn h_at_x(r: u32, x: &Float, prec: Precision) -> Result<Bounded> {
    let h = h_rational(r)?;
    let frac = Float::with_val(x.prec().max(64), x - Float::with_val(x.prec().max(64), x.floor_ref()));
    if frac.is_zero() {
        return Err(Error::Pole);
    }
    let dist = frac.to_f64().min(1.0 - frac.to_f64()).max(1e-18);
    let w = prec.with_guard(guard_bits(r, (1.0 / dist).ceil() as u64));
    let xw = Float::with_val(w, x);
    let (t, one_minus) = unit_point(&xw, w);
    // rounding of πx inside unit_point
    let dx = pow2(2 - w as i32);
    Ok(eval_form(&h, &t, &one_minus, w, Some(&dx)))
}

/// h_r(ζ_n^a) with ζ_n = e^{2πi/n}, computed from x = a/n.
pub fn h_at_root(h: &HRational, a: u64, n: u64, prec: Precision) -> Result<Bounded> {
    if n == 0 || a.is_multiple_of(n) {
        return Err(Error::Pole);
    }
    let w = prec.with_guard(guard_bits(h.order, n));
    let x = Float::with_val(w, a % n) / n;
    // x = a/n rounded to nearest, plus the rounding of πx: |Δx| <= 2^(2-w).
    let dx = pow2(2 - w as i32);
    let (t, one_minus) = unit_point(&x, w);
    Ok(eval_form(h, &t, &one_minus, w, Some(&dx)))
}

/// (e^{2πix}, 1 - e^{2πix}) at precision w.
fn unit_point(x: &Float, w: u32) -> (Complex, Complex) {
    let pix = Float::with_val(w, x * pi(w));
    let (s, c) = pix.clone().sin_cos(Float::new(w));
    // e^{iπx}
    let half = Complex::with_val(w, (&c, &s));
    let t = Complex::with_val(w, half.square_ref());
    // -2i·sin(πx)·e^{iπx} = 2 sin(πx)·(sin πx - i cos πx)
    let two_s = Float::with_val(w, &s * 2u32);
    let one_minus = Complex::with_val(w, (Float::with_val(w, &two_s * &s), -Float::with_val(w, &two_s * &c)));
    (t, one_minus)
}

fn check_unit_interval(x: &Float) -> Result<()> {
    if !(x.is_finite() && *x > 0 && *x < 1) {
        return invalid(format!("x must lie in (0, 1), got {}", x.to_f64()));
    }
    Ok(())
}

/// Closed trigonometric forms of h_r(e^{2πix}) for r in 1..=5:
///
/// | r | value |
/// |---|-------|
/// | 1 | (i/2)·cot πx |
/// | 2 | -(1/4)·csc² πx |
/// | 3 | -(i/4)·cos πx / sin³ πx |
/// | 4 | (1 + 2cos² πx) / (8 sin⁴ πx) |
/// | 5 | (i/4)·(2cos πx + cos³ πx) / sin⁵ πx |
pub fn h_trig(r: u32, x: &Float, prec: Precision) -> Result<Complex> {
    if !(1..=5).contains(&r) {
        return invalid(format!("closed trigonometric form exists for r in 1..=5, got {r}"));
    }
    check_unit_interval(x)?;
    let w = prec.with_guard(32 + 4 * ceil_log2(dist_inv(x)));
    let pix = Float::with_val(w, x * pi(w));
    let (s, c) = pix.sin_cos(Float::new(w));
    let sp = |k: u32| Float::with_val(w, (&s).pow(k));
    let c2 = Float::with_val(w, c.square_ref());
    let (re, im) = match r {
        1 => (Float::new(w), Float::with_val(w, &c / &s) / 2u32),
        2 => (-(Float::with_val(w, 1) / sp(2)) / 4u32, Float::new(w)),
        3 => (Float::new(w), -(Float::with_val(w, &c / sp(3)) / 4u32)),
        4 => (
            (Float::with_val(w, 1) + Float::with_val(w, &c2 * 2u32)) / (sp(4) * 8u32),
            Float::new(w),
        ),
        _ => {
            let num = Float::with_val(w, &c * 2u32) + Float::with_val(w, &c2 * &c);
            (Float::new(w), num / sp(5) / 4u32)
        }
    };
    Ok(Complex::with_val(w, (re, im)))
}

/// The alternative trigonometric forms in the doubled angle θ = 2πx:
/// r=2: -1/(2(1-cos θ)); r=3: -(i/2)·sin θ/(1-cos θ)²;
/// r=5: (i/2)·cot(πx)·(5 + cos θ)/(1-cos θ)².
pub fn h_trig_alt(r: u32, x: &Float, prec: Precision) -> Result<Complex> {
    check_unit_interval(x)?;
    let w = prec.with_guard(32 + 4 * ceil_log2(dist_inv(x)));
    let p = pi(w);
    let theta = Float::with_val(w, x * &p) * 2u32;
    let (s, c) = theta.sin_cos(Float::new(w));
    let one_minus_c = Float::with_val(w, 1 - &c);
    let sq = Float::with_val(w, one_minus_c.square_ref());
    match r {
        2 => Ok(Complex::with_val(
            w,
            (-(Float::with_val(w, 1) / (one_minus_c * 2u32)), 0),
        )),
        3 => Ok(Complex::with_val(w, (0, -(Float::with_val(w, &s / &sq) / 2u32)))),
        5 => {
            let cot = Float::with_val(w, x * &p).tan().recip();
            let v = cot * (c + 5u32) / sq / 2u32;
            Ok(Complex::with_val(w, (0, v)))
        }
        _ => invalid(format!("no alternative trigonometric form for r = {r}")),
    }
}

fn dist_inv(x: &Float) -> u64 {
    let xf = x.to_f64();
    let d = xf.min(1.0 - xf).max(1e-18);
    (1.0 / d).ceil() as u64
}

/// Smallest radius K such that the series tail bound `2(K-1)^{1-r}/(r-1)` is
/// at most `eps`, but never below 64.
pub fn default_truncation(r: u32, eps: f64) -> Result<u64> {
    if r < 2 {
        return invalid("series form requires r >= 2");
    }
    if eps.is_nan() || eps <= 0.0 {
        return invalid("truncation target must be positive");
    }
    let k = (2.0 / eps).powf(1.0 / f64::from(r - 1)).ceil() + 1.0;
    if !k.is_finite() || k > MAX_SERIES_RADIUS as f64 {
        return Err(Error::Infeasible(format!(
            "series truncation for r = {r}, eps = {eps:e} needs K > {MAX_SERIES_RADIUS}"
        )));
    }
    Ok((k as u64).max(64))
}

/// Truncated bilateral series `(r-1)!·(-1/(2πi))^r·Σ_{|n|<=K} (x+n)^{-r}`
/// with a rigorous bound covering both the tail and rounding.
pub fn h_series(r: u32, x: &Float, k: u64, prec: Precision) -> Result<(Complex, Float)> {
    if r < 2 {
        return invalid("the bilateral series is only absolutely convergent for r >= 2");
    }
    if k < 2 {
        return invalid("truncation radius K must be at least 2");
    }
    check_unit_interval(x)?;
    let w = prec.with_guard(32 + ceil_log2(k) + 4 * ceil_log2(dist_inv(x)));
    let xw = Float::with_val(w, x);
    let ki = k as i64;
    let mut sum = Float::with_val(w, 0);
    // n = 0 first, then pairs in increasing |n| for a fixed summation order.
    sum += Float::with_val(w, (&xw).pow(r)).recip();
    for n in 1..=ki {
        let plus = Float::with_val(w, &xw + n);
        let minus = Float::with_val(w, &xw - n);
        sum += Float::with_val(w, plus.pow(r)).recip();
        sum += Float::with_val(w, minus.pow(r)).recip();
    }
    // (-1/(2πi))^r = i^r / (2π)^r
    let two_pi = pi(w) * 2u32;
    let scale = Float::with_val(w, factorial(r - 1)) / Float::with_val(w, (&two_pi).pow(r));
    let magnitude = Float::with_val(w, &sum * &scale);
    let value = match r % 4 {
        0 => Complex::with_val(w, (magnitude, 0)),
        1 => Complex::with_val(w, (0, magnitude)),
        2 => Complex::with_val(w, (-magnitude, 0)),
        _ => Complex::with_val(w, (0, -magnitude)),
    };

    let scale64 = Float::with_val(64, &scale) * 1.000_001;
    let mut tail = Float::with_val(64, k - 1).pow(1 - r as i32);
    tail *= 2u32;
    tail /= r - 1;
    let d = Float::with_val(64, dist_inv(x));
    let mut rounding = Float::with_val(64, (&d).pow(r)) * (2 * k + 2);
    rounding *= (r + 4) * 4;
    rounding *= pow2(1 - w as i32);
    let mut bound = tail;
    bound += rounding;
    bound *= &scale64;
    bound.next_up();
    Ok((value, bound))
}

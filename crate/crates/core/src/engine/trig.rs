//! Real trigonometric sums for the block-sign families. No complex
//! arithmetic is involved.

use rug::ops::Pow;
use rug::{Complex, Float};

use super::{LValue, Method};
use crate::error::{invalid, Result};
use crate::numeric::{ceil_log2, pi, pow2, Precision};

/// Working precision: the (1 - cos θ) denominators lose about 2·log2(m)
/// bits at the smallest angle.
fn working_bits(prec: Precision, m: u32) -> u32 {
    prec.with_guard(32 + 4 * ceil_log2(u64::from(m).max(2)))
}

fn finish(sum: Float, prefactor: Float, terms: u64, m: u32, method: Method, prec: Precision) -> LValue {
    let w = sum.prec();
    let value = Float::with_val(w, &sum * &prefactor);
    // every term loses at most ~2·log2(2m) bits to the cancellation in 1 - cos
    let mut bound = Float::with_val(64, value.clone().abs());
    bound *= 64 * (terms + 4);
    bound *= Float::with_val(64, 4 * u64::from(m) * u64::from(m));
    bound *= pow2(1 - w as i32);
    bound.next_up();
    LValue {
        value: Complex::with_val(w, (value, 0)),
        error_bound: bound,
        method,
        terms_used: terms,
        precision: prec,
    }
}

/// `sin θ / (1 - cos θ)^2`
fn block_term(theta: &Float) -> Float {
    let w = theta.prec();
    let (s, c) = theta.clone().sin_cos(Float::new(w));
    let d = Float::with_val(w, 1 - c);
    s / d.square()
}

/// L(3, χ_{2m}) = π³/(4m³) · Σ_{a=1}^{m-1} sin(aπ/m) / (1 - cos(aπ/m))².
pub fn l_trig3(m: u32, prec: Precision) -> Result<LValue> {
    if m < 2 {
        return invalid(format!("trig3 needs m >= 2, got {m}"));
    }
    let w = working_bits(prec, m);
    let p = pi(w);
    let mut sum = Float::with_val(w, 0);
    for a in 1..m {
        let theta = Float::with_val(w, &p * a) / m;
        sum += block_term(&theta);
    }
    let prefactor = Float::with_val(w, (&p).pow(3u32)) / (4 * u64::from(m).pow(3));
    Ok(finish(sum, prefactor, u64::from(m - 1), m, Method::Trig3, prec))
}

/// L(3, f_{4m}) = π³/(32m³) · Σ_{a odd, 1<=a<=2m-1} sin(aπ/2m) / (1 - cos(aπ/2m))².
pub fn l_trig3_f(m: u32, prec: Precision) -> Result<LValue> {
    if m < 1 {
        return invalid("trig3_f needs m >= 1, got 0");
    }
    let w = working_bits(prec, 2 * m);
    let p = pi(w);
    let mut sum = Float::with_val(w, 0);
    for a in (1..2 * m).step_by(2) {
        let theta = Float::with_val(w, &p * a) / (2 * m);
        sum += block_term(&theta);
    }
    let prefactor = Float::with_val(w, (&p).pow(3u32)) / (32 * u64::from(m).pow(3));
    Ok(finish(sum, prefactor, u64::from(m), 2 * m, Method::Trig3F, prec))
}

/// L(5, χ_{2m}) = π⁵/(48m⁵) · Σ_{a=1}^{m-1} cot(πa/2m)·(5 + cos(πa/m)) / (1 - cos(πa/m))².
pub fn l_trig5(m: u32, prec: Precision) -> Result<LValue> {
    if m < 2 {
        return invalid(format!("trig5 needs m >= 2, got {m}"));
    }
    let w = working_bits(prec, 2 * m);
    let p = pi(w);
    let mut sum = Float::with_val(w, 0);
    for a in 1..m {
        let half = Float::with_val(w, &p * a) / (2 * m);
        let cot = Float::with_val(w, half.tan_ref()).recip();
        let full = Float::with_val(w, &p * a) / m;
        let c = full.cos();
        let d = Float::with_val(w, 1 - &c);
        sum += cot * (c + 5u32) / d.square();
    }
    let prefactor = Float::with_val(w, (&p).pow(5u32)) / (48 * u64::from(m).pow(5));
    Ok(finish(sum, prefactor, u64::from(m - 1), 2 * m, Method::Trig5, prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p256() -> Precision {
        Precision::new(256).unwrap()
    }

    fn sqrt(n: u32, b: u32) -> Float {
        Float::with_val(b, n).sqrt()
    }

    fn pi_pow(k: u32, b: u32) -> Float {
        Float::with_val(b, pi(b).pow(k))
    }

    #[test]
    fn trig3_examples() {
        let b = 400;
        let v = l_trig3(2, p256()).unwrap();
        assert!(v.distance_to(&(pi_pow(3, b) / 32u32)) < 1e-70);
        let v = l_trig3(6, p256()).unwrap();
        let want = pi_pow(3, b) * (sqrt(3, b) * 20u32 + 261u32) / 7776u32;
        assert!(v.distance_to(&want) < 1e-70);
        let nested = Float::with_val(b, sqrt(3, b) + 2u32).sqrt();
        let body = (Float::with_val(b, 2484) - sqrt(3, b) * 828u32) * nested
            + sqrt(2, b) * 54u32
            + sqrt(3, b) * 20u32
            + 261u32;
        let v = l_trig3(12, p256()).unwrap();
        assert!(v.distance_to(&(pi_pow(3, b) * body / 62208u32)) < 1e-70);
        assert!(l_trig3(1, p256()).is_err());
    }

    #[test]
    fn trig3_f_examples() {
        let b = 400;
        let v = l_trig3_f(1, p256()).unwrap();
        assert!(v.distance_to(&(pi_pow(3, b) / 32u32)) < 1e-70);
        let v = l_trig3_f(2, p256()).unwrap();
        assert!(v.distance_to(&(pi_pow(3, b) * sqrt(2, b) * 3u32 / 128u32)) < 1e-70);
        let nested = Float::with_val(b, sqrt(3, b) + 2u32).sqrt();
        let body = (Float::with_val(b, 2484) - sqrt(3, b) * 828u32) * nested + sqrt(2, b) * 54u32;
        let v = l_trig3_f(6, p256()).unwrap();
        assert!(v.distance_to(&(pi_pow(3, b) * body / 62208u32)) < 1e-70);
        assert!(l_trig3_f(0, p256()).is_err());
    }

    #[test]
    fn trig5_examples() {
        let b = 400;
        let v = l_trig5(2, p256()).unwrap();
        assert!(v.distance_to(&(pi_pow(5, b) * 5u32 / 1536u32)) < 1e-70);
        let v = l_trig5(3, p256()).unwrap();
        assert!(v.distance_to(&(pi_pow(5, b) * sqrt(3, b) * 17u32 / 8748u32)) < 1e-70);
        let v = l_trig5(4, p256()).unwrap();
        let want = pi_pow(5, b) * (sqrt(2, b) * 114u32 + 5u32) / 49152u32;
        assert!(v.distance_to(&want) < 1e-70);
        assert!(l_trig5(1, p256()).is_err());
    }
}

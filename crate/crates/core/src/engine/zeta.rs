//! Reference zeta values and the m → ∞ study of the block-sign families.

use rug::ops::Pow;
use rug::{Float, Integer};

use super::finite::l_half_sum;
use crate::error::{invalid, Error, Result};
use crate::numeric::{ceil_log2, pow2, Precision};
use crate::symfn::Family;

/// Largest partial-sum length the zeta oracle will attempt.
pub const DEFAULT_ZETA_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone)]
pub struct ZetaValue {
    pub value: Float,
    pub error_bound: Float,
    pub terms_used: u64,
}

/// |f'''(M)|/720 for f(x) = x^{-s}: the first omitted Euler–Maclaurin term,
/// which bounds the remainder for this completely monotone summand.
fn remainder_bound(s: u32, m: u64) -> Float {
    let coeff = u64::from(s) * u64::from(s + 1) * u64::from(s + 2);
    let mut b = Float::with_val(64, m);
    b.next_down();
    let mut b = b.pow(-(s as i32) - 3);
    b.next_up();
    b *= coeff;
    b /= 720u32;
    b.next_up();
    b
}

/// ζ(s) by partial summation plus the Euler–Maclaurin correction
/// `M^{1-s}/(s-1) - M^{-s}/2 + s·M^{-s-1}/12` for the tail after M.
pub fn zeta_oracle(s: u32, tolerance: &Float) -> Result<ZetaValue> {
    zeta_oracle_with_budget(s, tolerance, DEFAULT_ZETA_BUDGET)
}

pub fn zeta_oracle_with_budget(s: u32, tolerance: &Float, budget: u64) -> Result<ZetaValue> {
    if s < 2 {
        return invalid(format!("zeta oracle needs s >= 2, got {s}"));
    }
    if !(tolerance.is_finite() && *tolerance > 0) {
        return invalid("zeta tolerance must be positive");
    }
    let coeff = f64::from(s) * f64::from(s + 1) * f64::from(s + 2) / 720.0;
    let estimate = (coeff / tolerance.to_f64())
        .powf(1.0 / f64::from(s + 3))
        .ceil()
        .max(4.0);
    if !estimate.is_finite() || estimate > budget as f64 {
        return Err(Error::Infeasible(format!(
            "zeta({s}) to tolerance {:e} needs about {estimate:e} terms, budget is {budget}",
            tolerance.to_f64()
        )));
    }
    let mut m = estimate as u64;
    while remainder_bound(s, m) > *tolerance {
        m += 1;
    }
    Ok(zeta_partial(s, m, tolerance))
}

/// The oracle at an explicit cut-off M.
pub(crate) fn zeta_partial(s: u32, m: u64, tolerance: &Float) -> ZetaValue {
    let tol_bits = (-tolerance.to_f64().log2()).ceil().max(0.0) as u32;
    let w = (tol_bits + ceil_log2(m) + 32).max(128);
    let mut sum = Float::with_val(w, 0);
    // smallest terms first
    for n in (1..=m).rev() {
        sum += Float::with_val(w, Integer::from(n).pow(s)).recip();
    }
    let mf = Float::with_val(w, m);
    let ms = Float::with_val(w, (&mf).pow(s));
    let mut tail = Float::with_val(w, &mf / &ms) / (s - 1);
    tail -= Float::with_val(w, ms.recip_ref()) / 2u32;
    tail += Float::with_val(w, &ms * &mf).recip() * s / 12u32;
    sum += tail;

    let mut rounding = Float::with_val(64, 8 * (m + 8));
    rounding *= pow2(1 - w as i32);
    let mut bound = remainder_bound(s, m);
    bound += rounding;
    bound.next_up();
    ZetaValue {
        value: sum,
        error_bound: bound,
        terms_used: m,
    }
}

#[derive(Debug, Clone)]
pub struct LimitRow {
    pub m: u32,
    pub value: Float,
    pub gap: Float,
    pub error_bound: Float,
}

#[derive(Debug, Clone)]
pub struct LimitStudy {
    pub family: Family,
    pub r: u32,
    /// ζ(r) for the chi family, (1 - 2^{-r})·ζ(r) for f.
    pub reference: Float,
    pub reference_bound: Float,
    pub rows: Vec<LimitRow>,
}

/// L(r, ·) along an increasing schedule of m, with gaps to the limiting
/// zeta value. No monotonicity is asserted.
pub fn zeta_limit_study(
    r: u32,
    schedule: &[u32],
    family: Family,
    prec: Precision,
    oracle_tolerance: &Float,
) -> Result<LimitStudy> {
    if r < 3 || r.is_multiple_of(2) {
        return invalid(format!("limit study needs odd r >= 3, got {r}"));
    }
    if schedule.is_empty() {
        return invalid("schedule is empty");
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return invalid("schedule must be strictly ascending");
    }
    if schedule[0] < family.min_m() {
        return invalid(format!(
            "{family} family needs m >= {}, schedule starts at {}",
            family.min_m(),
            schedule[0]
        ));
    }
    let zeta = zeta_oracle(r, oracle_tolerance)?;
    let w = zeta.value.prec().max(prec.bits() + 32);
    let (reference, reference_bound) = match family {
        Family::Chi => (Float::with_val(w, &zeta.value), zeta.error_bound.clone()),
        Family::F => {
            let factor = Float::with_val(w, 1) - (Float::with_val(w, 1) >> r);
            (Float::with_val(w, &zeta.value * &factor), zeta.error_bound.clone())
        }
    };
    let rows = schedule
        .iter()
        .map(|&m| {
            let l = l_half_sum(&family.build(m)?, r, prec)?;
            let value = l.re().clone();
            let gap = Float::with_val(w, &reference - &value);
            let mut bound = Float::with_val(64, &l.error_bound + &reference_bound);
            bound.next_up();
            Ok(LimitRow {
                m,
                value,
                gap,
                error_bound: bound,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LimitStudy {
        family,
        r,
        reference,
        reference_bound,
        rows,
    })
}

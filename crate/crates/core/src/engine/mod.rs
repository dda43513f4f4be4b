//! L-value evaluation.
//!
//! Every method returns an [`LValue`] carrying an absolute error bound, so
//! results from different routes can be compared mechanically: two values
//! agree when `|v1 - v2| <= b1 + b2`.

mod direct;
mod finite;
pub mod identities;
mod trig;
mod zeta;

use std::fmt;
use std::str::FromStr;

use rug::{Complex, Float};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numeric::{abs_upper, decimal, parse_positive, short_decimal, Precision};
use crate::symfn::{Family, SymmetricFunction};

pub use direct::{direct_blocks, l_direct, l_direct_with_budget, DEFAULT_TERM_BUDGET};
pub use finite::{l_half_sum, l_theorem23, split_residual, SplitResidual};
pub use trig::{l_trig3, l_trig3_f, l_trig5};
pub use zeta::{zeta_limit_study, zeta_oracle, zeta_oracle_with_budget, LimitRow, LimitStudy, ZetaValue};

/// Default tolerance for the direct partial-sum oracle.
pub const DEFAULT_DIRECT_TOLERANCE: &str = "1e-12";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// The full sum over all N-1 roots of unity.
    FullSum,
    /// The q-1 term sum for N = 2q and odd r.
    HalfSum,
    /// Real trigonometric sum for L(3, χ_{2m}).
    Trig3,
    /// Odd-angle trigonometric sum for L(3, f_{4m}).
    Trig3F,
    /// Cotangent-weighted sum for L(5, χ_{2m}).
    Trig5,
    /// Partial sum of the series with an analytic tail bound.
    Direct,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::FullSum,
        Method::HalfSum,
        Method::Trig3,
        Method::Trig3F,
        Method::Trig5,
        Method::Direct,
    ];

    /// Wire name used by the CLI and JSON output.
    pub fn tag(self) -> &'static str {
        match self {
            Method::FullSum => "theorem23",
            Method::HalfSum => "half_sum",
            Method::Trig3 => "trig3",
            Method::Trig3F => "trig3_f",
            Method::Trig5 => "trig5",
            Method::Direct => "direct",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theorem23" | "full_sum" => Ok(Method::FullSum),
            other => Method::ALL
                .into_iter()
                .find(|m| m.tag() == other)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown method {other:?}"))),
        }
    }
}

impl Serialize for Method {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

impl<'de> Deserialize<'de> for Method {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A computed L-value with an absolute error bound.
#[derive(Debug, Clone)]
pub struct LValue {
    pub value: Complex,
    pub error_bound: Float,
    pub method: Method,
    /// Series terms summed (direct) or kernel evaluations (finite sums).
    pub terms_used: u64,
    pub precision: Precision,
}

impl LValue {
    pub fn re(&self) -> &Float {
        self.value.real()
    }

    pub fn im(&self) -> &Float {
        self.value.imag()
    }

    /// |self - other| <= bound(self) + bound(other)
    pub fn agrees_with(&self, other: &LValue) -> bool {
        let (diff, allowed) = self.discrepancy(other);
        diff <= allowed
    }

    /// (|self - other|, summed bound)
    pub fn discrepancy(&self, other: &LValue) -> (Float, Float) {
        let bits = self.value.prec().0.max(other.value.prec().0);
        let d = Complex::with_val(bits, &self.value - &other.value);
        let mut allowed = Float::with_val(64, &self.error_bound + &other.error_bound);
        allowed.next_up();
        (abs_upper(&d), allowed)
    }

    /// |Re(self) - x|
    pub fn distance_to(&self, x: &Float) -> Float {
        let bits = self.value.prec().0.max(x.prec());
        Float::with_val(bits, self.re() - x).abs()
    }

    pub fn to_json(&self) -> LValueJson {
        let digits = self.precision.decimal_digits();
        LValueJson {
            value_re: decimal(self.re(), digits),
            value_im: decimal(self.im(), digits),
            error_bound: short_decimal(&self.error_bound),
            method: self.method,
            terms_used: self.terms_used,
        }
    }
}

/// JSON form of an [`LValue`]; all numbers are decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LValueJson {
    pub value_re: String,
    pub value_im: String,
    pub error_bound: String,
    pub method: Method,
    pub terms_used: u64,
}

#[derive(Debug, Clone)]
pub struct EvalRequest {
    pub f: SymmetricFunction,
    pub r: u32,
    pub method: Method,
    pub precision: Precision,
    /// Tail tolerance for [`Method::Direct`].
    pub direct_tolerance: Float,
    /// Maximum number of terms the direct method may sum.
    pub direct_budget: u64,
}

impl EvalRequest {
    pub fn new(f: SymmetricFunction, r: u32, method: Method) -> Self {
        EvalRequest {
            f,
            r,
            method,
            precision: Precision::default(),
            direct_tolerance: parse_positive(DEFAULT_DIRECT_TOLERANCE, 64).expect("valid default"),
            direct_budget: DEFAULT_TERM_BUDGET,
        }
    }

    pub fn with_precision(mut self, precision: Precision) -> Self {
        self.precision = precision;
        self
    }

    pub fn with_tolerance(mut self, tolerance: Float) -> Self {
        self.direct_tolerance = tolerance;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.direct_budget = budget;
        self
    }

    /// Check the method's preconditions without evaluating.
    pub fn validate(&self) -> Result<()> {
        check_exponent(&self.f, self.r)?;
        let n = self.f.modulus();
        let origin = self.f.origin();
        match self.method {
            Method::FullSum | Method::Direct => Ok(()),
            Method::HalfSum => {
                if !n.is_multiple_of(2) {
                    return invalid(format!("half_sum needs an even modulus, got {n}"));
                }
                if self.r.is_multiple_of(2) {
                    return invalid(format!("half_sum needs odd r, got {}", self.r));
                }
                Ok(())
            }
            Method::Trig3 | Method::Trig5 => {
                let want = if self.method == Method::Trig3 { 3 } else { 5 };
                match origin {
                    Some(b) if b.family == Family::Chi && self.r == want => Ok(()),
                    Some(b) if b.family == Family::Chi => {
                        invalid(format!("{} evaluates r = {want} only, got r = {}", self.method, self.r))
                    }
                    _ => invalid(format!("{} requires a chi-family function", self.method)),
                }
            }
            Method::Trig3F => match origin {
                Some(b) if b.family == Family::F && self.r == 3 => Ok(()),
                Some(b) if b.family == Family::F => {
                    invalid(format!("trig3_f evaluates r = 3 only, got r = {}", self.r))
                }
                _ => invalid("trig3_f requires an f-family function"),
            },
        }
    }
}

/// r >= 2 and r matches the stored parity.
pub(crate) fn check_exponent(f: &SymmetricFunction, r: u32) -> Result<()> {
    if r < 2 {
        return invalid(format!("r must be at least 2, got {r}"));
    }
    if crate::symfn::Parity::of(r) != f.parity() {
        return Err(Error::ParityMismatch {
            r,
            parity: f.parity().name(),
        });
    }
    Ok(())
}

/// Evaluate a request with the method it names.
pub fn evaluate(req: &EvalRequest) -> Result<LValue> {
    req.validate()?;
    let m = req.f.origin().map(|b| b.m);
    match req.method {
        Method::FullSum => l_theorem23(&req.f, req.r, req.precision),
        Method::HalfSum => l_half_sum(&req.f, req.r, req.precision),
        Method::Trig3 => l_trig3(m.expect("validated"), req.precision),
        Method::Trig3F => l_trig3_f(m.expect("validated"), req.precision),
        Method::Trig5 => l_trig5(m.expect("validated"), req.precision),
        Method::Direct => l_direct_with_budget(&req.f, req.r, &req.direct_tolerance, req.direct_budget),
    }
}

/// Methods whose preconditions hold for `(f, r)`.
pub fn applicable_methods(f: &SymmetricFunction, r: u32) -> Vec<Method> {
    Method::ALL
        .into_iter()
        .filter(|&method| {
            let req = EvalRequest::new(f.clone(), r, method);
            req.validate().is_ok()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfn::{make_chi_2m, make_f_4m};

    #[test]
    fn method_tags_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.tag().parse::<Method>().unwrap(), m);
        }
        assert_eq!("full_sum".parse::<Method>().unwrap(), Method::FullSum);
        assert!("euler".parse::<Method>().is_err());
    }

    #[test]
    fn request_validation() {
        let chi8 = make_chi_2m(4).unwrap();
        assert!(EvalRequest::new(chi8.clone(), 3, Method::HalfSum).validate().is_ok());
        assert!(matches!(
            EvalRequest::new(chi8.clone(), 4, Method::FullSum).validate(),
            Err(Error::ParityMismatch { .. })
        ));
        assert!(EvalRequest::new(chi8.clone(), 1, Method::FullSum).validate().is_err());
        assert!(EvalRequest::new(chi8.clone(), 5, Method::Trig3).validate().is_err());
        assert!(EvalRequest::new(chi8.clone(), 3, Method::Trig3F).validate().is_err());
        assert!(EvalRequest::new(chi8, 5, Method::Trig5).validate().is_ok());
        let f8 = make_f_4m(2).unwrap();
        assert!(EvalRequest::new(f8.clone(), 3, Method::Trig3F).validate().is_ok());
        assert!(EvalRequest::new(f8, 3, Method::Trig3).validate().is_err());
    }

    #[test]
    fn applicable() {
        let chi8 = make_chi_2m(4).unwrap();
        assert_eq!(
            applicable_methods(&chi8, 3),
            vec![Method::FullSum, Method::HalfSum, Method::Trig3, Method::Direct]
        );
        assert_eq!(
            applicable_methods(&make_f_4m(3).unwrap(), 5),
            vec![Method::FullSum, Method::HalfSum, Method::Direct]
        );
    }

    #[test]
    fn lvalue_json_fields() {
        let v = evaluate(&EvalRequest::new(make_chi_2m(2).unwrap(), 3, Method::HalfSum)).unwrap();
        let j = serde_json::to_value(v.to_json()).unwrap();
        for key in ["value_re", "value_im", "error_bound", "method", "terms_used"] {
            assert!(j.get(key).is_some(), "{key}");
        }
        assert_eq!(j["method"], "half_sum");
        assert!(j["value_re"].as_str().unwrap().starts_with("0.96894614625936938"));
    }
}

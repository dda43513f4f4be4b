//! Numeric carriers shared by every module: the precision newtype, exact
//! complex rationals, and a few MPFR helpers.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::Constant;
use rug::{Complex, Float, Integer, Rational};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Smallest working precision accepted anywhere in the library.
pub const MIN_PRECISION: u32 = 64;

/// Default precision for evaluations (bits).
pub const DEFAULT_PRECISION: u32 = 256;

/// Working precision in bits. Always at least [`MIN_PRECISION`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(u32);

impl Precision {
    pub fn new(bits: u32) -> Result<Self> {
        if bits < MIN_PRECISION {
            return invalid(format!("precision must be at least {MIN_PRECISION} bits, got {bits}"));
        }
        if bits > rug::float::prec_max() / 2 {
            return invalid(format!("precision {bits} is too large"));
        }
        Ok(Precision(bits))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// Precision raised by `extra` guard bits.
    pub fn with_guard(self, extra: u32) -> u32 {
        self.0 + extra
    }

    /// Number of significant decimal digits printed for this precision.
    pub fn decimal_digits(self) -> usize {
        (f64::from(self.0) * 0.301).ceil() as usize
    }

    /// 2^(-bits) as a float.
    pub fn ulp(self) -> Float {
        pow2(-(self.0 as i32))
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision(DEFAULT_PRECISION)
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bits", self.0)
    }
}

/// 2^e at 64-bit precision (exact).
pub fn pow2(e: i32) -> Float {
    Float::with_val(64, 1) << e
}

pub fn pi(bits: u32) -> Float {
    Float::with_val(bits, Constant::Pi)
}

pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// Upper bound on log2(n!), used for guard-bit budgets.
pub fn log2_factorial_ceil(n: u32) -> u32 {
    factorial(n).significant_bits()
}

pub fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

/// Upper bound on |z| computed from the components, rounded up.
pub fn abs_upper(z: &Complex) -> Float {
    let (re, im) = z.clone().into_real_imag();
    let re = re.abs();
    let im = im.abs();
    // |z| <= |re| + |im|; cheap and always an upper bound.
    let mut s = Float::with_val(64, &re);
    s += &im;
    s.next_up();
    s
}

/// `x` rounded up to a double.
pub fn upper_f64(x: &Float) -> f64 {
    x.to_f64_round(rug::float::Round::Up)
}

/// Format a float with `digits` significant decimal digits.
///
/// Magnitudes in [1e-6, 1e21) are written positionally, others as `d.ddde±k`.
pub fn decimal(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let (negative, mantissa, exp) = x.to_sign_string_exp(10, Some(digits.max(2)));
    // value = 0.mantissa × 10^exp
    let exp = exp.unwrap_or(0);
    let mantissa = mantissa.trim_end_matches('0');
    let mantissa = if mantissa.is_empty() { "0" } else { mantissa };
    let sign = if negative { "-" } else { "" };
    if (-5..=21).contains(&exp) {
        let body = if exp <= 0 {
            format!("0.{}{}", "0".repeat((-exp) as usize), mantissa)
        } else if mantissa.len() <= exp as usize {
            format!("{}{}", mantissa, "0".repeat(exp as usize - mantissa.len()))
        } else {
            let (int, frac) = mantissa.split_at(exp as usize);
            format!("{int}.{frac}")
        };
        format!("{sign}{body}")
    } else {
        let (lead, rest) = mantissa.split_at(1);
        let rest = if rest.is_empty() {
            String::new()
        } else {
            format!(".{rest}")
        };
        format!("{sign}{lead}{rest}e{}", exp - 1)
    }
}

/// Short decimal rendering used for error bounds and residuals.
pub fn short_decimal(x: &Float) -> String {
    decimal(x, 6)
}

/// Parse a decimal string such as `1e-12` into a positive float.
pub fn parse_positive(text: &str, bits: u32) -> Result<Float> {
    let parsed = match Float::parse(text.trim()) {
        Ok(p) => Float::with_val(bits, p),
        Err(e) => return invalid(format!("cannot parse number {text:?}: {e}")),
    };
    if !parsed.is_finite() || parsed <= 0 {
        return invalid(format!("expected a positive number, got {text:?}"));
    }
    Ok(parsed)
}

/// An exact complex rational number `re + i·im`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CRational {
    pub re: Rational,
    pub im: Rational,
}

impl CRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        CRational { re, im }
    }

    pub fn real(re: impl Into<Rational>) -> Self {
        CRational {
            re: re.into(),
            im: Rational::new(),
        }
    }

    pub fn zero() -> Self {
        CRational::default()
    }

    pub fn is_zero(&self) -> bool {
        self.re.cmp0().is_eq() && self.im.cmp0().is_eq()
    }

    pub fn is_real(&self) -> bool {
        self.im.cmp0().is_eq()
    }

    /// Multiply by (-1)^r given as a sign flag.
    pub fn signed(&self, negate: bool) -> Self {
        if negate {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn to_complex(&self, bits: u32) -> Complex {
        Complex::with_val(bits, (&self.re, &self.im))
    }

    /// Upper bound on the modulus, |re| + |im|, as a float.
    pub fn abs_upper(&self) -> Float {
        let mut s = Float::with_val(64, self.re.clone().abs());
        s.next_up();
        let mut t = Float::with_val(64, self.im.clone().abs());
        t.next_up();
        s += t;
        s.next_up();
        s
    }
}

impl Add for &CRational {
    type Output = CRational;
    fn add(self, rhs: &CRational) -> CRational {
        CRational {
            re: Rational::from(&self.re + &rhs.re),
            im: Rational::from(&self.im + &rhs.im),
        }
    }
}

impl Sub for &CRational {
    type Output = CRational;
    fn sub(self, rhs: &CRational) -> CRational {
        CRational {
            re: Rational::from(&self.re - &rhs.re),
            im: Rational::from(&self.im - &rhs.im),
        }
    }
}

impl Mul for &CRational {
    type Output = CRational;
    fn mul(self, rhs: &CRational) -> CRational {
        let re = Rational::from(&self.re * &rhs.re) - Rational::from(&self.im * &rhs.im);
        let im = Rational::from(&self.re * &rhs.im) + Rational::from(&self.im * &rhs.re);
        CRational { re, im }
    }
}

impl Neg for CRational {
    type Output = CRational;
    fn neg(self) -> CRational {
        CRational {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl fmt::Display for CRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_real() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

fn integer_to_json(n: &Integer) -> serde_json::Value {
    match n.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(n.to_string()),
    }
}

fn integer_from_json<E: de::Error>(v: &serde_json::Value) -> std::result::Result<Integer, E> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(Integer::from)
            .ok_or_else(|| E::custom(format!("not an integer: {n}"))),
        serde_json::Value::String(s) => {
            Integer::from_str_radix(s, 10).map_err(|e| E::custom(format!("bad integer {s:?}: {e}")))
        }
        other => Err(E::custom(format!("expected integer, got {other}"))),
    }
}

/// Serialized as `[re_num, re_den, im_num, im_den]`; integers beyond i64
/// are written as decimal strings.
impl Serialize for CRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(4))?;
        seq.serialize_element(&integer_to_json(self.re.numer()))?;
        seq.serialize_element(&integer_to_json(self.re.denom()))?;
        seq.serialize_element(&integer_to_json(self.im.numer()))?;
        seq.serialize_element(&integer_to_json(self.im.denom()))?;
        seq.end()
    }
}

impl<'de> Deserialize<'de> for CRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = CRational;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("[re_num, re_den, im_num, im_den]")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<CRational, A::Error> {
                let mut parts = Vec::with_capacity(4);
                while let Some(v) = seq.next_element::<serde_json::Value>()? {
                    parts.push(integer_from_json::<A::Error>(&v)?);
                }
                if parts.len() != 4 {
                    return Err(de::Error::invalid_length(parts.len(), &self));
                }
                if parts[1].cmp0().is_eq() || parts[3].cmp0().is_eq() {
                    return Err(de::Error::custom("zero denominator"));
                }
                let mut it = parts.into_iter();
                let (rn, rd, inum, id) = (
                    it.next().unwrap(),
                    it.next().unwrap(),
                    it.next().unwrap(),
                    it.next().unwrap(),
                );
                Ok(CRational::new(Rational::from((rn, rd)), Rational::from((inum, id))))
            }
        }
        deserializer.deserialize_seq(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    #[test]
    fn precision_floor() {
        assert!(Precision::new(63).is_err());
        assert_eq!(Precision::new(64).unwrap().bits(), 64);
        assert_eq!(Precision::new(256).unwrap().decimal_digits(), 78);
    }

    #[test]
    fn crational_json_shape() {
        let z = CRational::new(Rational::from((-3, 4)), Rational::from((1, 2)));
        let s = serde_json::to_string(&z).unwrap();
        assert_eq!(s, "[-3,4,1,2]");
        let back: CRational = serde_json::from_str(&s).unwrap();
        assert_eq!(back, z);
        let big: CRational = serde_json::from_str(r#"["100000000000000000000000",1,0,1]"#).unwrap();
        assert_eq!(big.re, Rational::from(Integer::from(10).pow(23)));
        assert!(serde_json::from_str::<CRational>("[1,0,0,1]").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal(&Float::with_val(64, 0.5), 6), "0.5");
        assert_eq!(decimal(&Float::with_val(64, -1234.5), 6), "-1234.5");
        assert_eq!(decimal(&Float::with_val(64, 1000), 6), "1000");
        assert_eq!(decimal(&Float::with_val(64, 1.5e-12), 6), "1.5e-12");
        assert_eq!(decimal(&Float::with_val(64, 3e-6), 6), "0.000003");
        assert_eq!(decimal(&Float::with_val(64, 0), 6), "0");
    }

    #[test]
    fn parse_tolerance() {
        let t = parse_positive("1e-12", 128).unwrap();
        assert!((t.to_f64() - 1e-12).abs() < 1e-25);
        assert!(parse_positive("-1", 64).is_err());
        assert!(parse_positive("abc", 64).is_err());
    }

    #[test]
    fn log2_fact() {
        assert_eq!(log2_factorial_ceil(1), 1);
        assert_eq!(log2_factorial_ceil(5), 7); // 120 < 128
        assert_eq!(ceil_log2(48), 6);
        assert_eq!(ceil_log2(1), 0);
    }
}

//! Symmetric functions mod N.
//!
//! A symmetric function is a table of complex values on the residues
//! `1..N-1` obeying the reflection law `χ(N-a) = (-1)^r χ(a)`, extended
//! N-periodically with `χ(kN) = 0`. Only the parity of `r` is stored; the
//! exponent itself is chosen when an L-value is evaluated.

use std::collections::BTreeMap;
use std::fmt;

use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numeric::CRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(r: u32) -> Parity {
        if r % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    /// True when (-1)^r = -1.
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn name(self) -> &'static str {
        match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The two built-in block-sign families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `+1` on `1..m-1`, `-1` on `m+1..2m-1`, modulus `2m`.
    Chi,
    /// Odd-support variant, modulus `4m`.
    F,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Chi => "chi",
            Family::F => "f",
        }
    }

    pub fn build(self, m: u32) -> Result<SymmetricFunction> {
        match self {
            Family::Chi => make_chi_2m(m),
            Family::F => make_f_4m(m),
        }
    }

    pub fn modulus(self, m: u32) -> u64 {
        match self {
            Family::Chi => 2 * u64::from(m),
            Family::F => 4 * u64::from(m),
        }
    }

    pub fn min_m(self) -> u32 {
        match self {
            Family::Chi => 2,
            Family::F => 1,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chi" => Ok(Family::Chi),
            "f" => Ok(Family::F),
            other => invalid(format!("unknown family {other:?} (expected chi or f)")),
        }
    }
}

/// Records which constructor produced a symmetric function, so methods
/// specialised to a family can check their precondition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Builtin {
    pub family: Family,
    pub m: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricFunction {
    modulus: u32,
    parity: Parity,
    /// `values[a - 1]` holds χ(a) for a in 1..N-1.
    values: Vec<CRational>,
    origin: Option<Builtin>,
}

impl SymmetricFunction {
    /// Build from a full table, checking the reflection law.
    pub fn from_values(modulus: u32, parity: Parity, values: Vec<CRational>) -> Result<Self> {
        if modulus < 2 {
            return invalid(format!("modulus must be at least 2, got {modulus}"));
        }
        if values.len() != modulus as usize - 1 {
            return invalid(format!(
                "expected {} values for modulus {modulus}, got {}",
                modulus - 1,
                values.len()
            ));
        }
        let n = modulus as usize;
        for a in 1..n {
            let expected = values[a - 1].signed(parity.is_odd());
            if values[n - a - 1] != expected {
                return invalid(format!(
                    "reflection law fails at a = {a}: χ({}) = {} but (-1)^r χ({a}) = {}",
                    n - a,
                    values[n - a - 1],
                    expected
                ));
            }
        }
        Ok(SymmetricFunction {
            modulus,
            parity,
            values,
            origin: None,
        })
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn values(&self) -> &[CRational] {
        &self.values
    }

    pub fn origin(&self) -> Option<Builtin> {
        self.origin
    }

    /// χ(a) for a in 1..N-1.
    pub fn value(&self, a: u32) -> &CRational {
        &self.values[a as usize - 1]
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(CRational::is_real)
    }

    /// Upper bound on max_a |χ(a)|.
    pub fn max_abs(&self) -> rug::Float {
        self.values
            .iter()
            .map(CRational::abs_upper)
            .fold(rug::Float::with_val(64, 0), |acc, x| acc.max(&x))
    }

    /// Σ_a |χ(a)| over the listed residues, as an upper bound.
    pub fn abs_sum(&self, residues: impl Iterator<Item = u32>) -> rug::Float {
        let mut s = rug::Float::with_val(64, 0);
        for a in residues {
            s += self.value(a).abs_upper();
            s.next_up();
        }
        s
    }

    fn with_origin(mut self, family: Family, m: u32) -> Self {
        self.origin = Some(Builtin { family, m });
        self
    }
}

/// Reduce any integer to its residue in `0..N`.
fn residue(n: i64, modulus: u32) -> u32 {
    n.rem_euclid(i64::from(modulus)) as u32
}

fn block_sign(modulus: u32, on_plus: impl Fn(u32) -> Option<i32>) -> Vec<CRational> {
    (1..modulus).map(|a| CRational::real(on_plus(a).unwrap_or(0))).collect()
}

/// χ_{2m}: `+1` on `1..m-1`, `0` at `m`, `-1` on `m+1..2m-1`.
pub fn make_chi_2m(m: u32) -> Result<SymmetricFunction> {
    if m < 2 {
        return invalid(format!("chi family needs m >= 2, got {m}"));
    }
    let modulus = m
        .checked_mul(2)
        .ok_or_else(|| Error::InvalidArgument("m too large".into()))?;
    let values = block_sign(modulus, |a| match a.cmp(&m) {
        std::cmp::Ordering::Less => Some(1),
        std::cmp::Ordering::Equal => None,
        std::cmp::Ordering::Greater => Some(-1),
    });
    Ok(SymmetricFunction {
        modulus,
        parity: Parity::Odd,
        values,
        origin: None,
    }
    .with_origin(Family::Chi, m))
}

/// f_{4m}: zero on even residues, `+1` on odd `a < 2m`, `-1` on odd `a > 2m`.
pub fn make_f_4m(m: u32) -> Result<SymmetricFunction> {
    if m < 1 {
        return invalid("f family needs m >= 1, got 0");
    }
    let modulus = m
        .checked_mul(4)
        .ok_or_else(|| Error::InvalidArgument("m too large".into()))?;
    let values = block_sign(modulus, |a| {
        if a % 2 == 0 {
            None
        } else if a < 2 * m {
            Some(1)
        } else {
            Some(-1)
        }
    });
    Ok(SymmetricFunction {
        modulus,
        parity: Parity::Odd,
        values,
        origin: None,
    }
    .with_origin(Family::F, m))
}

/// Complete a table from its values on `1 <= a < N/2` (plus the midpoint for
/// even parity and even N) using the reflection law.
pub fn from_table(modulus: u32, parity: Parity, partial: &BTreeMap<u32, CRational>) -> Result<SymmetricFunction> {
    if modulus < 2 {
        return invalid(format!("modulus must be at least 2, got {modulus}"));
    }
    let n = modulus;
    let has_mid = n.is_multiple_of(2);
    for (&a, v) in partial {
        let in_lower = a >= 1 && 2 * a < n;
        let is_mid = has_mid && 2 * a == n;
        if is_mid {
            if parity.is_odd() && !v.is_zero() {
                return invalid(format!("odd parity with even modulus forces χ({a}) = 0, got {v}"));
            }
        } else if !in_lower {
            return invalid(format!("residue {a} is outside 1 <= a < N/2 for N = {n}"));
        }
    }
    let mut values = vec![CRational::zero(); n as usize - 1];
    for a in 1..n {
        if 2 * a < n {
            let v = partial.get(&a).cloned().unwrap_or_default();
            values[(n - a) as usize - 1] = v.signed(parity.is_odd());
            values[a as usize - 1] = v;
        } else if 2 * a == n && !parity.is_odd() {
            values[a as usize - 1] = partial.get(&a).cloned().unwrap_or_default();
        }
    }
    SymmetricFunction::from_values(modulus, parity, values)
}

/// The periodic extension to all integers.
pub fn extend(f: &SymmetricFunction, n: i64) -> CRational {
    let a = residue(n, f.modulus);
    if a == 0 {
        CRational::zero()
    } else {
        f.value(a).clone()
    }
}

/// Evidence that a symmetric function is not a Dirichlet character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// χ(ab) != χ(a)χ(b) for two units a, b.
    Product { a: u32, b: u32 },
    /// A residue where the vanishing rule fails: zero on a unit, or nonzero
    /// on a residue sharing a factor with N.
    Residue { a: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterVerdict {
    pub is_character: bool,
    pub witness: Option<Witness>,
}

impl CharacterVerdict {
    /// Re-evaluate the witness against `f`; true when it shows a genuine violation.
    pub fn witness_holds(&self, f: &SymmetricFunction) -> bool {
        match self.witness {
            None => false,
            Some(Witness::Residue { a }) => {
                let unit = gcd(u64::from(a), u64::from(f.modulus)) == 1;
                let zero = extend(f, i64::from(a)).is_zero();
                unit == zero
            }
            Some(Witness::Product { a, b }) => {
                let lhs = extend(f, i64::from(a) * i64::from(b));
                let rhs = &extend(f, i64::from(a)) * &extend(f, i64::from(b));
                lhs != rhs
            }
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Decide whether `f` is a Dirichlet character mod N.
///
/// Checks the vanishing rule (zero exactly off the units) for every residue
/// first, then multiplicativity over all unit pairs in lexicographic order.
pub fn classify_character(f: &SymmetricFunction) -> CharacterVerdict {
    let n = f.modulus;
    for a in 1..n {
        let unit = gcd(u64::from(a), u64::from(n)) == 1;
        if unit == f.value(a).is_zero() {
            return CharacterVerdict {
                is_character: false,
                witness: Some(Witness::Residue { a }),
            };
        }
    }
    let units: Vec<u32> = (1..n).filter(|&a| gcd(u64::from(a), u64::from(n)) == 1).collect();
    for &a in &units {
        for &b in &units {
            let ab = ((u64::from(a) * u64::from(b)) % u64::from(n)) as u32;
            let product = f.value(a) * f.value(b);
            if *f.value(ab) != product {
                return CharacterVerdict {
                    is_character: false,
                    witness: Some(Witness::Product { a, b }),
                };
            }
        }
    }
    CharacterVerdict {
        is_character: true,
        witness: None,
    }
}

/// JSON form `{modulus, parity, values: [[re_num, re_den, im_num, im_den], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymmetricFunctionJson {
    pub modulus: u32,
    pub parity: Parity,
    pub values: Vec<CRational>,
}

impl From<&SymmetricFunction> for SymmetricFunctionJson {
    fn from(f: &SymmetricFunction) -> Self {
        SymmetricFunctionJson {
            modulus: f.modulus,
            parity: f.parity,
            values: f.values.clone(),
        }
    }
}

impl TryFrom<SymmetricFunctionJson> for SymmetricFunction {
    type Error = Error;
    fn try_from(j: SymmetricFunctionJson) -> Result<Self> {
        SymmetricFunction::from_values(j.modulus, j.parity, j.values)
    }
}

impl Serialize for SymmetricFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SymmetricFunctionJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymmetricFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = SymmetricFunctionJson::deserialize(d)?;
        SymmetricFunction::try_from(j).map_err(serde::de::Error::custom)
    }
}

/// Convenience for tables of small integers.
pub fn int_table(entries: &[(u32, i64)]) -> BTreeMap<u32, CRational> {
    entries
        .iter()
        .map(|&(a, v)| (a, CRational::real(Integer::from(v))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(f: &SymmetricFunction) -> Vec<i64> {
        f.values()
            .iter()
            .map(|v| {
                assert!(v.is_real() && *v.re.denom() == 1);
                v.re.numer().to_i64().unwrap()
            })
            .collect()
    }

    #[test]
    fn chi_tables() {
        assert_eq!(ints(&make_chi_2m(2).unwrap()), vec![1, 0, -1]);
        assert_eq!(ints(&make_chi_2m(3).unwrap()), vec![1, 1, 0, -1, -1]);
        assert!(make_chi_2m(1).is_err());
        assert!(make_chi_2m(0).is_err());
        for m in 2..20 {
            let f = make_chi_2m(m).unwrap();
            assert!(f.value(m).is_zero());
            for a in 1..2 * m {
                assert_eq!(*f.value(2 * m - a), -f.value(a).clone());
            }
        }
    }

    #[test]
    fn f_tables() {
        assert_eq!(make_f_4m(1).unwrap().values(), make_chi_2m(2).unwrap().values());
        assert_eq!(ints(&make_f_4m(2).unwrap()), vec![1, 0, 1, 0, -1, 0, -1]);
        assert!(make_f_4m(0).is_err());
        for m in 1..12 {
            let f = make_f_4m(m).unwrap();
            for a in 1..4 * m {
                assert_eq!(*f.value(4 * m - a), -f.value(a).clone());
            }
        }
    }

    #[test]
    fn table_completion() {
        let f = from_table(4, Parity::Odd, &int_table(&[(1, 1)])).unwrap();
        assert_eq!(ints(&f), vec![1, 0, -1]);
        let f = from_table(6, Parity::Odd, &int_table(&[(1, 1), (2, 1)])).unwrap();
        assert_eq!(f.values(), make_chi_2m(3).unwrap().values());
        let f = from_table(5, Parity::Even, &int_table(&[(1, 2), (2, -1)])).unwrap();
        assert_eq!(ints(&f), vec![2, -1, -1, 2]);
        let f = from_table(6, Parity::Even, &int_table(&[(1, 1), (3, 7)])).unwrap();
        assert_eq!(ints(&f), vec![1, 0, 7, 0, 1]);
    }

    #[test]
    fn table_completion_rejects() {
        assert!(from_table(4, Parity::Odd, &int_table(&[(1, 1), (2, 5)])).is_err());
        assert!(from_table(4, Parity::Odd, &int_table(&[(3, 1)])).is_err());
        assert!(from_table(1, Parity::Odd, &int_table(&[])).is_err());
        // an explicit zero midpoint is accepted
        assert!(from_table(4, Parity::Odd, &int_table(&[(1, 1), (2, 0)])).is_ok());
    }

    #[test]
    fn from_values_checks_reflection() {
        let bad = vec![CRational::real(1), CRational::real(0), CRational::real(1)];
        assert!(SymmetricFunction::from_values(4, Parity::Odd, bad.clone()).is_err());
        assert!(SymmetricFunction::from_values(4, Parity::Even, bad).is_ok());
        assert!(SymmetricFunction::from_values(4, Parity::Odd, vec![CRational::real(1)]).is_err());
    }

    #[test]
    fn extension() {
        let chi4 = make_chi_2m(2).unwrap();
        assert_eq!(extend(&chi4, 7), CRational::real(-1));
        assert_eq!(extend(&chi4, -1), CRational::real(-1));
        assert_eq!(extend(&chi4, 0), CRational::zero());
        assert_eq!(extend(&chi4, -8), CRational::zero());
    }

    #[test]
    fn classifier_examples() {
        assert!(classify_character(&make_chi_2m(2).unwrap()).is_character);
        for m in 3..=6 {
            let f = make_chi_2m(m).unwrap();
            let v = classify_character(&f);
            assert!(!v.is_character, "chi_{}", 2 * m);
            assert!(v.witness_holds(&f));
        }
        assert!(classify_character(&make_f_4m(2).unwrap()).is_character);
        for m in [3, 6] {
            let f = make_f_4m(m).unwrap();
            let v = classify_character(&f);
            assert!(!v.is_character);
            assert!(v.witness_holds(&f));
        }
    }

    #[test]
    fn classifier_witness_order() {
        // χ_6(2) = 1 although gcd(2, 6) = 2: the vanishing rule fails first at a = 2.
        let v = classify_character(&make_chi_2m(3).unwrap());
        assert_eq!(v.witness, Some(Witness::Residue { a: 2 }));
        // f_12 vanishes correctly on non-units 2,3,4,6,... except at a = 3, where f_12(3) = 1.
        let v = classify_character(&make_f_4m(3).unwrap());
        assert_eq!(v.witness, Some(Witness::Residue { a: 3 }));
        // χ_10 mod 10 values on units 1,3,7,9 are 1,1,-1,-1 but χ_10(2) = 1 is nonzero.
        let v = classify_character(&make_chi_2m(5).unwrap());
        assert_eq!(v.witness, Some(Witness::Residue { a: 2 }));
    }

    #[test]
    fn classifier_multiplicativity_witness() {
        // Mod 5, even parity: zero only at multiples of 5, but 2·2 = 4 with
        // χ(2)^2 = 1 != χ(4) = 2.
        let f = from_table(5, Parity::Even, &int_table(&[(1, 2), (2, 1)])).unwrap();
        let v = classify_character(&f);
        assert_eq!(v.witness, Some(Witness::Product { a: 1, b: 1 }));
        assert!(v.witness_holds(&f));
        // The genuine quadratic character mod 5: (1, -1, -1, 1).
        let f = from_table(5, Parity::Even, &int_table(&[(1, 1), (2, -1)])).unwrap();
        assert!(classify_character(&f).is_character);
    }

    #[test]
    fn json_round_trip() {
        let f = make_f_4m(2).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.starts_with(r#"{"modulus":8,"parity":"odd","values":[[1,1,0,1]"#));
        let back: SymmetricFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(back.values(), f.values());
        let bad = r#"{"modulus":4,"parity":"odd","values":[[1,1,0,1],[0,1,0,1],[1,1,0,1]]}"#;
        assert!(serde_json::from_str::<SymmetricFunction>(bad).is_err());
    }
}

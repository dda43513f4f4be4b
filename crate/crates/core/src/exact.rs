//! Closed-form radical constants and their high-precision evaluation.
//!
//! Each constant has the shape `π^k · body / d` where `body` is a small
//! expression tree over rationals, square roots, sums and products.

use std::fmt;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::engine::l_half_sum;
use crate::error::{invalid, Error, Result};
use crate::numeric::{decimal, factorial, pi, pow2, short_decimal, Precision};
use crate::symfn::Family;

/// Guard bits added on top of the requested precision during evaluation.
const GUARD_BITS: u32 = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Rat(Rational),
    Sqrt(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Rat(Rational::from(n))
    }

    pub fn sqrt(arg: Expr) -> Expr {
        Expr::Sqrt(Box::new(arg))
    }

    /// √n for an integer n.
    pub fn sqrt_int(n: i64) -> Expr {
        Expr::sqrt(Expr::int(n))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    /// Left-nested sum; `terms` must be non-empty.
    pub fn sum(terms: Vec<Expr>) -> Expr {
        let mut it = terms.into_iter();
        let first = it.next().expect("empty sum");
        it.fold(first, Expr::add)
    }

    /// `n·e`.
    pub fn scaled(n: i64, e: Expr) -> Expr {
        Expr::mul(Expr::int(n), e)
    }

    fn eval(&self, w: u32) -> Result<Float> {
        Ok(match self {
            Expr::Rat(q) => Float::with_val(w, q),
            Expr::Sqrt(arg) => {
                let v = arg.eval(w)?;
                if v <= 0 {
                    return Err(Error::NegativeSqrt);
                }
                v.sqrt()
            }
            Expr::Add(a, b) => a.eval(w)? + b.eval(w)?,
            Expr::Mul(a, b) => a.eval(w)? * b.eval(w)?,
        })
    }

    fn check_radicals(&self) -> Result<()> {
        match self {
            Expr::Rat(_) => Ok(()),
            Expr::Sqrt(arg) => {
                arg.check_radicals()?;
                if arg.eval(64)? <= 0 {
                    return Err(Error::NegativeSqrt);
                }
                Ok(())
            }
            Expr::Add(a, b) | Expr::Mul(a, b) => {
                a.check_radicals()?;
                b.check_radicals()
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Rat(q) => {
                if *q < 0 {
                    write!(f, "({q})")
                } else {
                    write!(f, "{q}")
                }
            }
            Expr::Sqrt(arg) => match **arg {
                Expr::Rat(_) => write!(f, "√{arg}"),
                _ => write!(f, "√({arg})"),
            },
            Expr::Add(a, b) => write!(f, "{a} + {b}"),
            Expr::Mul(a, b) => {
                let wrap = |e: &Expr| matches!(e, Expr::Add(..));
                if wrap(a) {
                    write!(f, "({a})")?;
                } else {
                    write!(f, "{a}")?;
                }
                f.write_str("·")?;
                if wrap(b) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
        }
    }
}

/// `π^pi_power · body / denominator`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactConstant {
    pi_power: u32,
    denominator: Integer,
    body: Expr,
}

impl ExactConstant {
    /// Rejects a non-positive denominator and any square root whose argument
    /// is not positive at 64 bits.
    pub fn new(pi_power: u32, denominator: impl Into<Integer>, body: Expr) -> Result<Self> {
        let denominator = denominator.into();
        if denominator <= 0 {
            return invalid(format!("denominator must be positive, got {denominator}"));
        }
        body.check_radicals()?;
        Ok(ExactConstant {
            pi_power,
            denominator,
            body,
        })
    }

    pub fn pi_power(&self) -> u32 {
        self.pi_power
    }

    pub fn denominator(&self) -> &Integer {
        &self.denominator
    }

    pub fn body(&self) -> &Expr {
        &self.body
    }
}

impl fmt::Display for ExactConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = matches!(&self.body, Expr::Rat(q) if *q == 1);
        match (self.pi_power, unit) {
            (0, _) => {}
            (1, true) => f.write_str("π")?,
            (1, false) => f.write_str("π·")?,
            (k, true) => write!(f, "π^{k}")?,
            (k, false) => write!(f, "π^{k}·")?,
        }
        match &self.body {
            _ if unit && self.pi_power > 0 => {}
            Expr::Add(..) => write!(f, "({})", self.body)?,
            _ => write!(f, "{}", self.body)?,
        }
        write!(f, "/{}", self.denominator)
    }
}

/// Bottom-up evaluation at `prec + 32` bits, rounded to `prec`.
pub fn eval_constant(c: &ExactConstant, prec: Precision) -> Result<Float> {
    let w = prec.with_guard(GUARD_BITS);
    let mut v = c.body.eval(w)?;
    if c.pi_power > 0 {
        v *= pi(w).pow(c.pi_power);
    }
    v /= &c.denominator;
    Ok(Float::with_val(prec.bits(), v))
}

#[derive(Debug, Clone)]
pub struct ConstantEntry {
    pub id: &'static str,
    pub family: Family,
    /// Family parameter: the modulus is 2m for chi and 4m for f.
    pub m: u32,
    pub r: u32,
    pub constant: ExactConstant,
}

/// `(2+√3)^{1/2}`
fn nested() -> Expr {
    Expr::sqrt(Expr::add(Expr::int(2), Expr::sqrt_int(3)))
}

/// `(a - b√3)·(2+√3)^{1/2}`
fn nested_term(a: i64, b: i64) -> Expr {
    Expr::mul(Expr::add(Expr::int(a), Expr::scaled(-b, Expr::sqrt_int(3))), nested())
}

fn entry(id: &'static str, family: Family, m: u32, r: u32, denominator: i64, body: Expr) -> ConstantEntry {
    let constant = ExactConstant::new(r, denominator, body).expect("table constants are well formed");
    ConstantEntry {
        id,
        family,
        m,
        r,
        constant,
    }
}

/// The closed forms of L(3, χ_{2m}), L(3, f_{4m}) and L(5, χ_{2m}) known
/// for small m, in a fixed order.
pub fn constant_table() -> Vec<ConstantEntry> {
    use Expr as E;
    use Family::{Chi, F};
    let one = || E::int(1);
    vec![
        entry("L3.chi4", Chi, 2, 3, 32, one()),
        entry("L3.chi6", Chi, 3, 3, 243, E::scaled(5, E::sqrt_int(3))),
        entry("L3.chi8", Chi, 4, 3, 256, E::add(E::scaled(6, E::sqrt_int(2)), one())),
        entry(
            "L3.chi12",
            Chi,
            6,
            3,
            7776,
            E::add(E::scaled(20, E::sqrt_int(3)), E::int(261)),
        ),
        entry(
            "L3.chi24",
            Chi,
            12,
            3,
            62208,
            E::sum(vec![
                nested_term(2484, 828),
                E::scaled(54, E::sqrt_int(2)),
                E::scaled(20, E::sqrt_int(3)),
                E::int(261),
            ]),
        ),
        entry("L3.f4", F, 1, 3, 32, one()),
        entry("L3.f8", F, 2, 3, 128, E::scaled(3, E::sqrt_int(2))),
        entry("L3.f12", F, 3, 3, 864, E::int(29)),
        entry(
            "L3.f24",
            F,
            6,
            3,
            62208,
            E::add(nested_term(2484, 828), E::scaled(54, E::sqrt_int(2))),
        ),
        entry("L5.chi4", Chi, 2, 5, 1536, E::int(5)),
        entry("L5.chi6", Chi, 3, 5, 8748, E::scaled(17, E::sqrt_int(3))),
        entry(
            "L5.chi8",
            Chi,
            4,
            5,
            49152,
            E::add(E::int(5), E::scaled(114, E::sqrt_int(2))),
        ),
        entry(
            "L5.chi12",
            Chi,
            6,
            5,
            1119744,
            E::add(E::int(3675), E::scaled(68, E::sqrt_int(3))),
        ),
        entry(
            "L5.chi24",
            Chi,
            12,
            5,
            35831808,
            E::sum(vec![
                nested_term(143460, 47820),
                E::scaled(342, E::sqrt_int(2)),
                E::scaled(68, E::sqrt_int(3)),
                E::int(3675),
            ]),
        ),
    ]
}

pub fn find_constant(family: Family, m: u32, r: u32) -> Option<ConstantEntry> {
    constant_table()
        .into_iter()
        .find(|e| e.family == family && e.m == m && e.r == r)
}

/// One row of the verification report.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyRow {
    pub id: String,
    pub family: Family,
    pub m: u32,
    pub r: u32,
    pub decimal_value: String,
    pub matched: bool,
    pub residual: String,
}

/// Outcome of comparing one constant against the half-length sum.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub exact: Float,
    pub computed: Float,
    pub residual: Float,
    /// Engine error bound plus 2^(8-prec).
    pub allowance: Float,
}

impl Comparison {
    pub fn matched(&self) -> bool {
        self.residual <= self.allowance
    }
}

pub fn compare_entry(e: &ConstantEntry, prec: Precision) -> Result<Comparison> {
    let exact = eval_constant(&e.constant, prec)?;
    let l = l_half_sum(&e.family.build(e.m)?, e.r, prec)?;
    let w = l.value.prec().0.max(prec.bits());
    let computed = Float::with_val(w, l.re());
    let mut residual = Float::with_val(64, Float::with_val(w, &computed - &exact).abs());
    // a nonzero imaginary part counts against the match
    residual += Float::with_val(64, l.im().abs_ref());
    residual.next_up();
    let mut allowance = Float::with_val(64, &l.error_bound);
    allowance += pow2(8 - prec.bits() as i32);
    Ok(Comparison {
        exact,
        computed,
        residual,
        allowance,
    })
}

impl VerifyRow {
    pub fn new(e: &ConstantEntry, c: &Comparison, prec: Precision) -> Self {
        VerifyRow {
            id: e.id.to_string(),
            family: e.family,
            m: e.m,
            r: e.r,
            decimal_value: decimal(&c.exact, prec.decimal_digits()),
            matched: c.matched(),
            residual: short_decimal(&c.residual),
        }
    }
}

/// E_0, E_2, …, E_{2(count-1)} from `Σ_{k=0}^{n} C(2n,2k)·E_{2k} = 0`.
pub fn euler_numbers(count: usize) -> Vec<Integer> {
    let mut e: Vec<Integer> = Vec::with_capacity(count);
    for n in 0..count {
        if n == 0 {
            e.push(Integer::from(1));
            continue;
        }
        let two_n = 2 * n as u32;
        let mut acc = Integer::new();
        for (k, ek) in e.iter().enumerate() {
            acc += Integer::from(Integer::binomial_u(two_n, 2 * k as u32)) * ek;
        }
        e.push(-acc);
    }
    e
}

/// `(1/2)·(π/2)^{2p+1}·|E_{2p}|/(2p)!`, which equals L(2p+1, χ_4).
pub fn euler_series_value(p: u32, prec: Precision) -> Result<Float> {
    if p == 0 {
        return invalid("p must be at least 1");
    }
    let w = prec.with_guard(GUARD_BITS);
    let e = euler_numbers(p as usize + 1).pop().expect("non-empty");
    let half_pi = pi(w) / 2u32;
    let mut v = Float::with_val(w, half_pi.pow(2 * p + 1));
    v *= Float::with_val(w, e.abs());
    v /= Float::with_val(w, factorial(2 * p));
    v /= 2u32;
    Ok(Float::with_val(prec.bits(), v))
}

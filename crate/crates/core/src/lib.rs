//! L-series attached to symmetric functions mod N.
//!
//! A symmetric function χ mod N satisfies `χ(N-a) = (-1)^r χ(a)` and is
//! extended N-periodically with `χ(kN) = 0`. For `r >= 2` its L-series
//! `Σ χ(n)/n^r` equals a finite sum of the kernels h_r at N-th roots of
//! unity. This crate evaluates that sum, its half-length refinement for even
//! N and odd r, the trigonometric specialisations for the block-sign
//! families, and a direct partial-sum oracle, all at arbitrary precision and
//! each with an error bound.

pub mod engine;
pub mod error;
pub mod exact;
pub mod hfun;
pub mod numeric;
pub mod symfn;

pub use engine::{evaluate, EvalRequest, LValue, Method};
pub use error::{Error, Result};
pub use numeric::{CRational, Precision};
pub use symfn::{Family, Parity, SymmetricFunction};

//! Pairing identities used to collapse the trigonometric sums.

use rug::ops::Pow;
use rug::Float;

use crate::numeric::pi;

/// `sin θ/(1-cos θ)² + sin(π-θ)/(1-cos(π-θ))²` and the collapsed form
/// `4 sin θ (3 + cos 2θ)/(1 - cos 2θ)²`, for θ in (0, π).
pub fn cubic_pair(theta: &Float) -> (Float, Float) {
    let w = theta.prec();
    let term = |t: &Float| {
        let (s, c) = t.clone().sin_cos(Float::new(w));
        s / Float::with_val(w, 1 - c).square()
    };
    let mirror = Float::with_val(w, pi(w) - theta);
    let lhs = term(theta) + term(&mirror);

    let (s, _) = theta.clone().sin_cos(Float::new(w));
    let c2 = Float::with_val(w, theta * 2u32).cos();
    let d = Float::with_val(w, 1 - &c2).square();
    let rhs = s * 4u32 * (c2 + 3u32) / d;
    (lhs, rhs)
}

/// The three equal expressions for θ in (0, π/2):
/// `cot θ (5+cos 2θ)/(1-cos 2θ)² + (same at π/2 - θ)`,
/// `2(5 + 18cos² 2θ + cos⁴ 2θ)/sin⁵ 2θ`, and
/// `(2/sin 2θ)·(57 + 38 cos 4θ + cos² 4θ)/(1 - cos 4θ)²`.
pub fn quintic_pair(theta: &Float) -> (Float, Float, Float) {
    let w = theta.prec();
    let term = |t: &Float| {
        let cot = Float::with_val(w, t.tan_ref()).recip();
        let c = Float::with_val(w, t * 2u32).cos();
        let d = Float::with_val(w, 1 - &c).square();
        cot * (c + 5u32) / d
    };
    let mirror = Float::with_val(w, pi(w) / 2u32 - theta);
    let lhs = term(theta) + term(&mirror);

    let (s2, c2) = Float::with_val(w, theta * 2u32).sin_cos(Float::new(w));
    let c2sq = Float::with_val(w, c2.square_ref());
    let first = (Float::with_val(w, &c2sq * 18u32) + Float::with_val(w, c2sq.square_ref()) + 5u32) * 2u32
        / Float::with_val(w, (&s2).pow(5u32));

    let c4 = Float::with_val(w, theta * 4u32).cos();
    let num = Float::with_val(w, &c4 * 38u32) + Float::with_val(w, c4.square_ref()) + 57u32;
    let d = Float::with_val(w, 1 - &c4).square();
    let second = Float::with_val(w, 2u32) / s2 * num / d;
    (lhs, first, second)
}

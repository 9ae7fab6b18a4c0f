//! Random parameters satisfying each case's defining conditions.

use num_complex::Complex64;
use rand::Rng;

use super::{CaseTag, EvolutionParams};
use crate::random;
use crate::su3::structure::lambda_coefficients;
use crate::su3::{CMat3, Vec8};

/// Coordinates of `U λ₃ U†`; `v·(v∗v) = 0`.
fn rotated_lambda3<R: Rng + ?Sized>(rng: &mut R) -> Vec8 {
    let u = random::unitary(rng);
    let l3 = CMat3::diag([1.0, -1.0, 0.0].map(|x| Complex64::new(x, 0.0)));
    let m = u * l3 * u.adjoint();
    Vec8(lambda_coefficients(&m).map(|c| c.re))
}

/// Pure-state direction: `v∗v = v`, `|v| = 1`.
fn pure_direction<R: Rng + ?Sized>(rng: &mut R) -> Vec8 {
    random::pure_state(rng)
}

fn diagonal<R: Rng + ?Sized>(rng: &mut R) -> Vec8 {
    let mut v = Vec8::ZERO;
    v[2] = rng.random_range(-1.5..=1.5);
    v[7] = rng.random_range(-1.5..=1.5);
    v
}

/// `a + ib` with `(a + ib)·λ = N`, `N² = 0`.
fn nilpotent_pair<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> (Vec8, Vec8) {
    let u = random::unitary(rng);
    let mut e13 = CMat3::ZERO;
    e13[(0, 2)] = Complex64::new(scale, 0.0);
    let n = u * e13 * u.adjoint();
    let h = (n + n.adjoint()).scale_re(0.5);
    let g = (n - n.adjoint()).scale(Complex64::new(0.0, -0.5));
    let coords = |m: &CMat3| Vec8(lambda_coefficients(m).map(|c| c.re));
    (coords(&h), coords(&g))
}

/// Parameters for `tag` with norms drawn from `[0.5, 2]`; `General` draws a
/// generic pair.
pub fn random_params<R: Rng + ?Sized>(tag: CaseTag, rng: &mut R) -> EvolutionParams {
    let s: f64 = rng.random_range(0.5..=2.0);
    let (a, b) = match tag {
        CaseTag::LinearStarPos => (pure_direction(rng) * s, Vec8::ZERO),
        CaseTag::LinearStarNeg => (pure_direction(rng) * -s, Vec8::ZERO),
        CaseTag::LinearNullCubic => (rotated_lambda3(rng) * s, Vec8::ZERO),
        CaseTag::LinearDiagonal => (diagonal(rng), Vec8::ZERO),
        CaseTag::NonlinStarPos => (Vec8::ZERO, pure_direction(rng) * s),
        CaseTag::NonlinStarNeg => (Vec8::ZERO, pure_direction(rng) * -s),
        CaseTag::NonlinNullCubic => (Vec8::ZERO, rotated_lambda3(rng) * s),
        CaseTag::NonlinDiagonal => (Vec8::ZERO, diagonal(rng)),
        CaseTag::Rational => nilpotent_pair(rng, 2.0 * s),
        CaseTag::General => (random::vec8(rng, s), random::vec8(rng, s)),
    };
    EvolutionParams::new(a, b).expect("finite parameters")
}

/// A random admissible initial state.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R) -> Vec8 {
    random::state(rng)
}

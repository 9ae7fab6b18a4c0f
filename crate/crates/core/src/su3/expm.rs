//! Matrix exponentials: a general scaling-and-squaring routine for complex
//! 3×3 matrices and the closed forms of `exp(τ a·λ)`.

use std::sync::atomic::{AtomicUsize, Ordering};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cmat3::CMat3;
use super::cubic::TrigWeights;
use super::structure::{lambda_dot, SQRT3};
use super::vec8::Vec8;
use crate::error::{Error, Result};

/// Default bound on `‖M‖₁` accepted by [`matrix_exp`]; `e^500` is still well
/// inside the f64 range.
pub const DEFAULT_EXP_BOUND: f64 = 500.0;

/// Relative tolerance for the branch conditions of [`exp_lambda`].
pub const EPS_CASE: f64 = 1e-9;

/// Entrywise tolerance (relative to the result's magnitude) above which the
/// closed form is overruled by [`matrix_exp`].
pub const EXP_ORACLE_TOL: f64 = 1e-10;

const TAYLOR_TERMS: usize = 18;

/// `e^M` via scaling and squaring with a Taylor core.
pub fn matrix_exp(m: &CMat3) -> Result<CMat3> {
    matrix_exp_bounded(m, DEFAULT_EXP_BOUND)
}

/// As [`matrix_exp`] with an explicit bound on `‖M‖₁`.
pub fn matrix_exp_bounded(m: &CMat3, bound: f64) -> Result<CMat3> {
    if !m.is_finite() {
        return Err(Error::NonFinite("matrix_exp argument"));
    }
    let norm = m.norm_1();
    if norm > bound {
        return Err(Error::OverflowRisk { norm, bound });
    }
    // ‖M / 2^s‖₁ ≤ 1/2
    let mut s = 0;
    let mut scaled_norm = norm;
    while scaled_norm > 0.5 {
        scaled_norm *= 0.5;
        s += 1;
    }
    let x = m.scale_re(0.5f64.powi(s));
    // Horner: I + X(I + X/2(I + X/3(...)))
    let mut r = CMat3::IDENTITY;
    for k in (1..=TAYLOR_TERMS).rev() {
        r = CMat3::IDENTITY + (x * r).scale_re(1.0 / k as f64);
    }
    for _ in 0..s {
        r = r * r;
    }
    Ok(r)
}

/// Which closed form [`exp_lambda`] uses for a given `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LambdaBranch {
    Zero,
    /// `a∗a = |a| a`.
    StarPos,
    /// `a∗a = −|a| a`.
    StarNeg,
    /// `a·(a∗a) = 0`.
    NullCubic,
    /// Only `a₃`, `a₈` nonzero.
    Diagonal,
    /// Trigonometric spectral formula.
    General,
    /// `sin(α/3)` or a cosine denominator too small; series only.
    NearDegenerate,
}

pub fn lambda_branch(a: &Vec8) -> LambdaBranch {
    let n = a.norm();
    if n == 0.0 {
        return LambdaBranch::Zero;
    }
    let aa = a.star(a);
    let tol = EPS_CASE * n * n;
    if (aa - *a * n).norm() <= tol {
        return LambdaBranch::StarPos;
    }
    if (aa + *a * n).norm() <= tol {
        return LambdaBranch::StarNeg;
    }
    if a.dot(&aa).abs() <= EPS_CASE * n * n * n {
        return LambdaBranch::NullCubic;
    }
    if is_diagonal(a) {
        return LambdaBranch::Diagonal;
    }
    match TrigWeights::new(a) {
        Some(w) if w.conditioning >= 1e-6 => LambdaBranch::General,
        _ => LambdaBranch::NearDegenerate,
    }
}

/// True when all components other than 3 and 8 vanish relative to `|a|`.
pub fn is_diagonal(a: &Vec8) -> bool {
    let off = [0, 1, 3, 4, 5, 6].iter().fold(0.0_f64, |m, &i| m.max(a[i].abs()));
    off <= EPS_CASE * a.norm()
}

static ORACLE_OVERRIDES: AtomicUsize = AtomicUsize::new(0);

/// Number of times [`exp_lambda`] has fallen back to the series result since
/// process start.
pub fn oracle_overrides() -> usize {
    ORACLE_OVERRIDES.load(Ordering::Relaxed)
}

/// `exp(τ a·λ)` from the closed form for the branch of `a`, checked against
/// [`matrix_exp`]; the series result is returned if they disagree.
pub fn exp_lambda(tau: Complex64, a: &Vec8) -> Result<CMat3> {
    let closed = exp_lambda_closed(tau, a)?;
    let m = lambda_dot(a).scale(tau);
    // Closed form alone when the series would overflow.
    let oracle = match matrix_exp_bounded(&m, 700.0) {
        Ok(o) => o,
        Err(Error::OverflowRisk { .. }) => return Ok(closed),
        Err(e) => return Err(e),
    };
    let scale = oracle.max_abs().max(1.0);
    let diff = closed.max_diff(&oracle);
    if !(diff <= EXP_ORACLE_TOL * scale) {
        ORACLE_OVERRIDES.fetch_add(1, Ordering::Relaxed);
        log::warn!(
            "exp_lambda closed form ({:?}) off by {diff:e} for tau={tau}, a={a}; using series",
            lambda_branch(a)
        );
        return Ok(oracle);
    }
    Ok(closed)
}

/// The closed form alone, without the series cross-check.
pub fn exp_lambda_closed(tau: Complex64, a: &Vec8) -> Result<CMat3> {
    if !a.is_finite() || !tau.re.is_finite() || !tau.im.is_finite() {
        return Err(Error::NonFinite("exp_lambda argument"));
    }
    let n = a.norm();
    let al = lambda_dot(a);
    let one = CMat3::IDENTITY;
    let r = match lambda_branch(a) {
        LambdaBranch::Zero => one,
        LambdaBranch::StarPos => star_exp(tau, n, &al),
        LambdaBranch::StarNeg => star_exp(-tau, n, &al.scale_re(-1.0)),
        LambdaBranch::NullCubic => {
            let x = tau * n;
            let aal = lambda_dot(&a.star(a));
            one.scale(Complex64::from(1.0 / 3.0) + x.cosh() * (2.0 / 3.0))
                + al.scale(x.sinh() / n)
                + aal.scale((x.cosh() - 1.0) / (SQRT3 * n * n))
        }
        LambdaBranch::Diagonal => {
            let (a3, a8) = (a[2], a[7]);
            CMat3::diag([
                (tau * (a3 + a8 / SQRT3)).exp(),
                (tau * (-a3 + a8 / SQRT3)).exp(),
                (tau * (-2.0 * a8 / SQRT3)).exp(),
            ])
        }
        LambdaBranch::General => {
            let w = TrigWeights::new(a).expect("general branch has trig weights");
            let aal = lambda_dot(&a.star(a));
            let mut out = CMat3::ZERO;
            for k in 0..3 {
                let ex = (tau * w.roots[k]).exp();
                out += (one.scale_re(w.c[k]) + al.scale_re(w.d[k]) + aal.scale_re(w.e[k])).scale(ex);
            }
            out
        }
        LambdaBranch::NearDegenerate => matrix_exp_bounded(&al.scale(tau), f64::INFINITY)?,
    };
    Ok(r)
}

/// `a∗a = |a|a`: only the eigenvalues `2|a|/√3` (once) and `−|a|/√3` (twice).
fn star_exp(tau: Complex64, n: f64, al: &CMat3) -> CMat3 {
    let up = (tau * (2.0 * n / SQRT3)).exp();
    let down = (tau * (-n / SQRT3)).exp();
    CMat3::IDENTITY.scale(up / 3.0 + down * (2.0 / 3.0)) + al.scale((up - down) / (SQRT3 * n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su3::structure::gell_mann;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn generic() -> Vec8 {
        Vec8::new([0.3, -0.7, 0.2, 1.1, -0.4, 0.5, 0.9, -0.6])
    }

    #[test]
    fn exp_of_zero_is_identity() {
        assert_eq!(matrix_exp(&CMat3::ZERO).unwrap(), CMat3::IDENTITY);
        let e = exp_lambda(c(0.0), &generic()).unwrap();
        assert!(e.max_diff(&CMat3::IDENTITY) < 1e-15);
    }

    #[test]
    fn diagonal_matrix_exponentiates_entrywise() {
        let d = [Complex64::new(1.5, -0.3), Complex64::new(-2.0, 4.0), c(0.25)];
        let e = matrix_exp(&CMat3::diag(d)).unwrap();
        for i in 0..3 {
            assert!((e[(i, i)] - d[i].exp()).norm() < 1e-13 * d[i].exp().norm());
        }
        assert!(e[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn overflow_risk_is_reported() {
        let m = CMat3::scalar(c(1000.0));
        assert!(matches!(matrix_exp(&m), Err(Error::OverflowRisk { .. })));
    }

    #[test]
    fn star_pos_branch_matches_diagonal_exponential() {
        let a = -Vec8::e(8);
        assert_eq!(lambda_branch(&a), LambdaBranch::StarPos);
        let tau = 0.7;
        let e = exp_lambda_closed(c(tau), &a).unwrap();
        let x = (-tau / SQRT3).exp();
        let want = CMat3::diag([c(x), c(x), c((2.0 * tau / SQRT3).exp())]);
        assert!(e.max_diff(&want) < 1e-14);
    }

    #[test]
    fn each_branch_matches_the_series() {
        let cases = [
            (-Vec8::e(8) * 1.3, LambdaBranch::StarPos),
            (Vec8::e(8) * 0.8, LambdaBranch::StarNeg),
            (Vec8::e(3) * 1.1, LambdaBranch::NullCubic),
            (Vec8::new([0.0, 0.0, 0.4, 0.0, 0.0, 0.0, 0.0, 0.9]), LambdaBranch::Diagonal),
            (generic(), LambdaBranch::General),
        ];
        for (a, branch) in cases {
            assert_eq!(lambda_branch(&a), branch);
            for tau in [c(1.0), Complex64::new(0.0, -2.3), Complex64::new(0.4, 1.7)] {
                let closed = exp_lambda_closed(tau, &a).unwrap();
                let series = matrix_exp(&lambda_dot(&a).scale(tau)).unwrap();
                let scale = series.max_abs().max(1.0);
                assert!(
                    closed.max_diff(&series) < 1e-12 * scale,
                    "{branch:?} tau={tau}: {}",
                    closed.max_diff(&series)
                );
            }
        }
    }

    #[test]
    fn null_cubic_off_axis() {
        let a = Vec8::new([0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0]) * 2.0;
        assert_eq!(lambda_branch(&a), LambdaBranch::NullCubic);
        let closed = exp_lambda_closed(Complex64::new(0.0, 1.3), &a).unwrap();
        let series = matrix_exp(&lambda_dot(&a).scale(Complex64::new(0.0, 1.3))).unwrap();
        assert!(closed.max_diff(&series) < 1e-13);
    }

    #[test]
    fn unitary_for_imaginary_tau() {
        let u = exp_lambda(Complex64::new(0.0, 2.1), &generic()).unwrap();
        assert!((u * u.adjoint()).max_diff(&CMat3::IDENTITY) < 1e-13);
        assert!((u.det() - c(1.0)).norm() < 1e-13);
    }

    #[test]
    fn group_property() {
        let a = generic();
        let (t1, t2) = (Complex64::new(0.3, -0.8), Complex64::new(-0.5, 1.4));
        let lhs = exp_lambda(t1 + t2, &a).unwrap();
        let rhs = exp_lambda(t1, &a).unwrap() * exp_lambda(t2, &a).unwrap();
        assert!(lhs.max_diff(&rhs) < 1e-12 * lhs.max_abs().max(1.0));
    }

    #[test]
    fn single_generator_exponential() {
        // exp(iθλ₁) acts as a rotation on the (1,2) block.
        let th = 0.9;
        let e = matrix_exp(&gell_mann()[0].scale(Complex64::new(0.0, th))).unwrap();
        assert!((e[(0, 0)] - c(th.cos())).norm() < 1e-15);
        assert!((e[(0, 1)] - Complex64::new(0.0, th.sin())).norm() < 1e-15);
        assert!((e[(2, 2)] - c(1.0)).norm() < 1e-15);
    }
}

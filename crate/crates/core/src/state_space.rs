//! Geometry of the qutrit state space Ω: membership, boundary strata, pure-state
//! parametrization, density-matrix eigenvalues and entropy.

use std::f64::consts::PI;

use nalgebra::{Matrix3, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::su3::structure::{bloch_to_density, bloch_unchecked, SQRT3};
use crate::su3::{cubic_invariant, CMat3, Vec8};

/// Absolute tolerance on both boundary residuals.
pub const TOL_GEOM: f64 = 1e-8;

/// Eigenvalues this close to 0 or 1 are snapped before taking logarithms.
const EIG_SNAP: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StateTag {
    Interior,
    PureBoundary,
    MixedBoundary,
    Invalid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateClass {
    pub tag: StateTag,
    /// `ξ²`.
    pub r_ball: f64,
    /// `3ξ² − 2ξ·(ξ∗ξ)`, equal to `1 − 27 det ρ`.
    pub r_det: f64,
    /// `max(|ξ² − 1|, ‖ξ∗ξ − ξ‖)`; zero exactly on pure states.
    pub purity_residual: f64,
}

impl StateClass {
    pub fn is_valid(&self) -> bool {
        self.tag != StateTag::Invalid
    }
}

pub fn r_det(xi: &Vec8) -> f64 {
    3.0 * xi.norm_sq() - 2.0 * cubic_invariant(xi)
}

pub fn purity_residual(xi: &Vec8) -> f64 {
    (xi.norm_sq() - 1.0).abs().max((xi.star(xi) - *xi).norm())
}

pub fn classify(xi: &Vec8) -> StateClass {
    classify_with(xi, TOL_GEOM)
}

pub fn classify_with(xi: &Vec8, tol: f64) -> StateClass {
    let r_ball = xi.norm_sq();
    let r_det = r_det(xi);
    let purity_residual = purity_residual(xi);
    let tag = if !xi.is_finite() {
        StateTag::Invalid
    } else if purity_residual <= tol {
        StateTag::PureBoundary
    } else if r_ball > 1.0 + tol || r_det > 1.0 + tol {
        StateTag::Invalid
    } else if (r_det - 1.0).abs() <= tol {
        StateTag::MixedBoundary
    } else {
        StateTag::Interior
    };
    StateClass {
        tag,
        r_ball,
        r_det,
        purity_residual,
    }
}

/// Pure state on the coset `SU(3)/U(2)` from four angles.
///
/// Falls back to the Bloch vector of the explicit ket
/// `(cos α sin β e^{iγ}, sin α e^{iδ}, cos α cos β)` if the closed form misses
/// the purity residual.
pub fn pure_from_angles(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Vec8 {
    let xi = pure_from_angles_closed(alpha, beta, gamma, delta);
    if purity_residual(&xi) <= TOL_GEOM {
        return xi;
    }
    let fallback = pure_from_angles_ket(alpha, beta, gamma, delta);
    log::warn!(
        "pure_from_angles closed form off by {:e}; using ket construction",
        purity_residual(&xi)
    );
    fallback
}

pub fn pure_from_angles_closed(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Vec8 {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let dg = delta - gamma;
    let s = SQRT3;
    Vec8::new([
        s * sa * sb * ca * dg.cos(),
        s * sa * sb * ca * dg.sin(),
        s * 0.5 * (ca * ca * sb * sb - sa * sa),
        s * ca * ca * cb * sb * gamma.cos(),
        -s * ca * ca * cb * sb * gamma.sin(),
        s * cb * ca * sa * delta.cos(),
        -s * cb * ca * sa * delta.sin(),
        0.5 * (ca * ca * sb * sb + sa * sa - 2.0 * ca * ca * cb * cb),
    ])
}

pub fn pure_from_angles_ket(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Vec8 {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let psi = [
        Complex64::from_polar(ca * sb, gamma),
        Complex64::from_polar(sa, delta),
        Complex64::new(ca * cb, 0.0),
    ];
    bloch_unchecked(&CMat3::from_fn(|i, j| psi[i] * psi[j].conj()))
}

/// Eigenvalues of `ρ(ξ)`, descending.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigTriple {
    pub nu1: f64,
    pub nu2: f64,
    pub nu3: f64,
    pub alpha: f64,
}

impl EigTriple {
    pub fn as_array(&self) -> [f64; 3] {
        [self.nu1, self.nu2, self.nu3]
    }
}

pub fn eigenvalues(xi: &Vec8) -> Result<EigTriple> {
    if !classify(xi).is_valid() {
        return Err(Error::InvalidState);
    }
    Ok(eigenvalues_unchecked(xi))
}

/// Trigonometric eigenvalues without the validity check.
pub fn eigenvalues_unchecked(xi: &Vec8) -> EigTriple {
    let n = xi.norm();
    if n < TOL_GEOM {
        let t = 1.0 / 3.0;
        return EigTriple {
            nu1: t,
            nu2: t,
            nu3: t,
            alpha: 0.0,
        };
    }
    let alpha = (cubic_invariant(xi) / (n * n * n)).clamp(-1.0, 1.0).acos();
    let t = alpha / 3.0;
    let nu1 = 1.0 / 3.0 + 2.0 / 3.0 * n * t.cos();
    let nu3 = 1.0 / 3.0 - 2.0 / 3.0 * n * (t - PI / 3.0).cos();
    // The isolated root is exact to rounding; the close pair comes from its
    // sum and e₂ = ν₁ν₂ + ν₁ν₃ + ν₂ν₃ = (1 − ξ²)/3.
    let e2 = (1.0 - xi.norm_sq()) / 3.0;
    let pair = |iso: f64| {
        let s = 1.0 - iso;
        let p = e2 - iso * s;
        let h = (0.25 * s * s - p).max(0.0).sqrt();
        (0.5 * s + h, 0.5 * s - h)
    };
    let (nu1, nu2, nu3) = if alpha <= PI / 2.0 {
        let (x, y) = pair(nu1);
        (nu1, x, y)
    } else {
        let (x, y) = pair(nu3);
        (x, y, nu3)
    };
    EigTriple {
        nu1,
        nu2,
        nu3,
        alpha,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LogBase {
    /// Normalizes the entropy to `[0, 1]`.
    #[default]
    Three,
    Natural,
}

/// Eigenvalues of `ρ(ξ)` from a Hermitian eigensolver, descending. Absolute
/// accuracy is near machine precision even at degenerate pairs, where the
/// trigonometric form loses half the digits.
pub fn hermitian_spectrum(xi: &Vec8) -> [f64; 3] {
    let rho = bloch_to_density(xi);
    let m = Matrix3::from_fn(|i, j| rho.m[i][j]);
    match SymmetricEigen::try_new(m, f64::EPSILON, 1000) {
        Some(e) => {
            let mut v = [e.eigenvalues[0], e.eigenvalues[1], e.eigenvalues[2]];
            v.sort_by(|x, y| y.total_cmp(x));
            v
        }
        None => eigenvalues_unchecked(xi).as_array(),
    }
}

/// Von Neumann entropy `−Σ ν log₃ ν`.
pub fn entropy(xi: &Vec8) -> Result<f64> {
    entropy_with(xi, LogBase::Three)
}

pub fn entropy_with(xi: &Vec8, base: LogBase) -> Result<f64> {
    if !classify(xi).is_valid() {
        return Err(Error::InvalidState);
    }
    Ok(entropy_of_spectrum(&hermitian_spectrum(xi), base))
}

pub fn entropy_of(eig: &EigTriple, base: LogBase) -> f64 {
    entropy_of_spectrum(&eig.as_array(), base)
}

/// Evaluated as `1 − Σ ν log₃(3ν)`, exact at `ν = (1/3, 1/3, 1/3)` and at
/// pure spectra.
pub fn entropy_of_spectrum(nu: &[f64; 3], base: LogBase) -> f64 {
    let ln3 = 3f64.ln();
    let d: f64 = nu
        .iter()
        .map(|&v| {
            let v = if v < EIG_SNAP {
                0.0
            } else if (v - 1.0).abs() < EIG_SNAP {
                1.0
            } else {
                v.min(1.0)
            };
            if v == 0.0 {
                0.0
            } else {
                v * (3.0 * v).ln()
            }
        })
        .sum();
    let s = (1.0 - d / ln3).clamp(0.0, 1.0);
    match base {
        LogBase::Three => s,
        LogBase::Natural => s * ln3,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use crate::su3::{bloch_to_density, density_to_bloch, exp_lambda};
    use nalgebra::Matrix3;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn hermitian_eigs(xi: &Vec8) -> [f64; 3] {
        let r = bloch_to_density(xi);
        let m = Matrix3::from_fn(|i, j| r[(i, j)]);
        let e = m.symmetric_eigen().eigenvalues;
        let mut v = [e[0], e[1], e[2]];
        v.sort_by(|a, b| b.partial_cmp(a).unwrap());
        v
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&Vec8::ZERO).tag, StateTag::Interior);
        assert_eq!(classify(&-Vec8::e(8)).tag, StateTag::PureBoundary);
        let c = classify(&(Vec8::e(8) * 0.5));
        assert_eq!(c.tag, StateTag::MixedBoundary);
        assert!((c.r_det - 1.0).abs() < 1e-15);
        assert_eq!(classify(&(Vec8::e(1) * 2.0)).tag, StateTag::Invalid);
        let mut nan = Vec8::ZERO;
        nan[0] = f64::NAN;
        assert_eq!(classify(&nan).tag, StateTag::Invalid);
    }

    #[test]
    fn pure_from_angles_examples() {
        assert!(pure_from_angles(0.0, 0.0, 0.0, 0.0).dist(&-Vec8::e(8)) < 1e-15);
        let want = Vec8::new([0.0, 0.0, -SQRT3 / 2.0, 0.0, 0.0, 0.0, 0.0, 0.5]);
        assert!(pure_from_angles(PI / 2.0, 0.0, 0.0, 0.0).dist(&want) < 1e-15);
    }

    #[test]
    fn closed_angles_agree_with_ket() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let ang: [f64; 4] = std::array::from_fn(|_| rand::Rng::random_range(&mut rng, -7.0..7.0));
            let c = pure_from_angles_closed(ang[0], ang[1], ang[2], ang[3]);
            let k = pure_from_angles_ket(ang[0], ang[1], ang[2], ang[3]);
            assert!(c.dist(&k) < 1e-13, "{ang:?}");
        }
    }

    #[test]
    fn eigenvalue_examples() {
        let e = eigenvalues(&Vec8::ZERO).unwrap();
        assert_eq!(e.as_array(), [1.0 / 3.0; 3]);
        let e = eigenvalues(&pure_from_angles(0.3, 1.1, -0.2, 2.0)).unwrap();
        assert!((e.nu1 - 1.0).abs() < 1e-12 && e.nu2.abs() < 1e-7 && e.nu3.abs() < 1e-7);
        let e = eigenvalues(&(Vec8::e(8) * 0.5)).unwrap();
        assert!((e.nu1 - 0.5).abs() < 1e-15 && (e.nu2 - 0.5).abs() < 1e-7 && e.nu3.abs() < 1e-15);
        assert!(matches!(eigenvalues(&(Vec8::e(1) * 2.0)), Err(Error::InvalidState)));
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&Vec8::ZERO).unwrap(), 1.0);
        assert_eq!(entropy(&-Vec8::e(8)).unwrap(), 0.0);
        assert_eq!(entropy(&pure_from_angles(0.3, 1.1, -0.2, 2.0)).unwrap(), 0.0);
        let want = 2f64.ln() / 3f64.ln();
        assert!((entropy(&(Vec8::e(8) * 0.5)).unwrap() - want).abs() < 1e-12);
        let nat = entropy_with(&Vec8::ZERO, LogBase::Natural).unwrap();
        assert!((nat - 3f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn r_det_tracks_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let xi = random::state(&mut rng);
            let d = bloch_to_density(&xi).det().re;
            assert!((1.0 - r_det(&xi) - 27.0 * d).abs() < 1e-12);
        }
        let xi = Vec8::e(8) * 0.5;
        assert!(bloch_to_density(&xi).det().norm() < 1e-16);
    }

    proptest! {
        #[test]
        fn angles_always_pure(a in -10.0..10.0f64, b in -10.0..10.0f64,
                              g in -10.0..10.0f64, d in -10.0..10.0f64) {
            prop_assert_eq!(classify(&pure_from_angles(a, b, g, d)).tag, StateTag::PureBoundary);
        }

        #[test]
        fn eigenvalues_match_eigensolver(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let xi = random::state(&mut rng);
            let e = eigenvalues(&xi).unwrap();
            let h = hermitian_eigs(&xi);
            for k in 0..3 {
                prop_assert!((e.as_array()[k] - h[k]).abs() < 1e-10);
            }
            prop_assert!((e.nu1 + e.nu2 + e.nu3 - 1.0).abs() < 1e-12);
        }

        #[test]
        fn entropy_is_unitarily_invariant(seed in any::<u64>(), th in -3.0..3.0f64) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let xi = random::state(&mut rng);
            let a = random::vec8(&mut rng, 1.0);
            let u = exp_lambda(Complex64::new(0.0, th), &a).unwrap();
            let rho = bloch_to_density(&xi);
            let moved = density_to_bloch(&(u * rho * u.adjoint())).unwrap();
            prop_assert!((entropy(&xi).unwrap() - entropy(&moved).unwrap()).abs() < 1e-10);
        }

        #[test]
        fn random_states_are_valid(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            prop_assert!(classify(&random::state(&mut rng)).is_valid());
            prop_assert_eq!(classify(&random::pure_state(&mut rng)).tag, StateTag::PureBoundary);
        }
    }
}

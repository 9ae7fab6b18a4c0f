//! Seeded samplers for vectors, unitaries and states.

use num_complex::Complex64;
use rand::Rng;

use crate::su3::structure::{bloch_unchecked, gell_mann};
use crate::su3::{matrix_exp, CMat3, Vec8};

/// Components uniform in `[-scale, scale]`.
pub fn vec8<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Vec8 {
    Vec8(std::array::from_fn(|_| rng.random_range(-scale..=scale)))
}

/// Uniform on the unit sphere of R^8.
pub fn unit_vec8<R: Rng + ?Sized>(rng: &mut R) -> Vec8 {
    loop {
        let v = vec8(rng, 1.0);
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}

/// `exp(i c·λ)` with `c` uniform in `[-π, π]^8`.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R) -> CMat3 {
    let l = gell_mann();
    let mut h = CMat3::ZERO;
    for k in 0..8 {
        h += l[k].scale_re(rng.random_range(-std::f64::consts::PI..=std::f64::consts::PI));
    }
    matrix_exp(&h.scale(Complex64::new(0.0, 1.0))).expect("bounded generator")
}

/// Normalized complex 3-vector with Gaussian-like components.
pub fn ket<R: Rng + ?Sized>(rng: &mut R) -> [Complex64; 3] {
    loop {
        let v: [Complex64; 3] = std::array::from_fn(|_| {
            Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
        });
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-3 && n <= 1.0 {
            return v.map(|z| z / n);
        }
    }
}

/// `|ψ⟩⟨ψ|`.
pub fn projector(psi: &[Complex64; 3]) -> CMat3 {
    CMat3::from_fn(|i, j| psi[i] * psi[j].conj())
}

/// Bloch vector of a random pure state.
pub fn pure_state<R: Rng + ?Sized>(rng: &mut R) -> Vec8 {
    bloch_unchecked(&projector(&ket(rng)))
}

/// Random density matrix: a convex combination of three random pure states.
pub fn density<R: Rng + ?Sized>(rng: &mut R) -> CMat3 {
    let w: [f64; 3] = std::array::from_fn(|_| rng.random_range(0.0..=1.0));
    let s: f64 = w.iter().sum::<f64>().max(1e-12);
    let mut rho = CMat3::ZERO;
    for wk in w {
        rho += projector(&ket(rng)).scale_re(wk / s);
    }
    rho
}

/// Bloch vector of [`density`].
pub fn state<R: Rng + ?Sized>(rng: &mut R) -> Vec8 {
    bloch_unchecked(&density(rng))
}

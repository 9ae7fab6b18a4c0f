//! The global propagator `ρ(t) = A ρ₀ A† / Tr(A ρ₀ A†)` with
//! `A = exp(t(b·λ − i a·λ))`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::EvolutionParams;
use crate::error::{Error, Result};
use crate::state_space::classify;
use crate::su3::structure::{bloch_to_density, bloch_unchecked, lambda_dot};
use crate::su3::{matrix_exp_bounded, CMat3, Vec8};

/// Largest `‖t(b·λ − i a·λ)‖₁` exponentiated in one piece.
const SLICE_NORM: f64 = 16.0;

/// `b·λ − i a·λ`.
pub fn generator(p: &EvolutionParams) -> CMat3 {
    lambda_dot(p.b()) - lambda_dot(p.a()).scale(Complex64::new(0.0, 1.0))
}

/// `A(t) = exp(t(b·λ − i a·λ))` as a single exponential.
pub fn propagator(p: &EvolutionParams, t: f64) -> Result<CMat3> {
    if !t.is_finite() {
        return Err(Error::NonFinite("time"));
    }
    matrix_exp_bounded(&generator(p).scale_re(t), 700.0)
}

fn evolve_density(rho: &CMat3, a: &CMat3) -> Result<CMat3> {
    let r = *a * *rho * a.adjoint();
    let tr = r.trace().re;
    if !(tr > f64::MIN_POSITIVE) || !tr.is_finite() {
        return Err(Error::DenominatorVanished(tr));
    }
    let r = r.scale_re(1.0 / tr);
    Ok((r + r.adjoint()).scale_re(0.5))
}

/// The time-`t` flow map, precomputed for repeated application.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowMap {
    step: CMat3,
    slices: u64,
}

impl FlowMap {
    /// Long times are split into slices with renormalization after each,
    /// which is exact because the slices commute.
    pub fn new(p: &EvolutionParams, t: f64) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::NonFinite("time"));
        }
        let m = generator(p).scale_re(t);
        let slices = (m.norm_1() / SLICE_NORM).ceil().max(1.0);
        if slices > 1e9 {
            return Err(Error::OverflowRisk {
                norm: m.norm_1(),
                bound: SLICE_NORM * 1e9,
            });
        }
        Ok(FlowMap {
            step: matrix_exp_bounded(&m.scale_re(1.0 / slices), 2.0 * SLICE_NORM)?,
            slices: slices as u64,
        })
    }

    /// Applies the map without validating `xi`.
    pub fn apply(&self, xi: &Vec8) -> Result<Vec8> {
        let mut rho = bloch_to_density(xi);
        for _ in 0..self.slices {
            rho = evolve_density(&rho, &self.step)?;
        }
        Ok(bloch_unchecked(&rho))
    }
}

/// `ξ(t)` through the density matrix.
pub fn propagate_exact(xi0: &Vec8, p: &EvolutionParams, t: f64) -> Result<Vec8> {
    if !t.is_finite() {
        return Err(Error::NonFinite("time"));
    }
    if !classify(xi0).is_valid() {
        return Err(Error::InvalidState);
    }
    FlowMap::new(p, t)?.apply(xi0)
}

/// Convex weight carried through the flow: `Φ(λρ₁ + (1−λ)ρ₂) =
/// λ′Φ(ρ₁) + (1−λ′)Φ(ρ₂)` with `λ′ = λ w₁ / (λ w₁ + (1−λ) w₂)`,
/// `w_k = Tr(A ρ_k A†)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvexityCheck {
    pub lambda_prime: f64,
    /// `‖Φ(mixture) − (λ′Φ(ρ₁) + (1−λ′)Φ(ρ₂))‖` in Bloch coordinates.
    pub map_residual: f64,
}

pub fn convexity_lambda(
    xi1: &Vec8,
    xi2: &Vec8,
    lambda: f64,
    p: &EvolutionParams,
    t: f64,
) -> Result<ConvexityCheck> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::DomainError(format!("λ = {lambda} outside [0, 1]")));
    }
    for xi in [xi1, xi2] {
        if !classify(xi).is_valid() {
            return Err(Error::InvalidState);
        }
    }
    let a = propagator(p, t)?;
    let weight = |xi: &Vec8| (a * bloch_to_density(xi) * a.adjoint()).trace().re;
    let (w1, w2) = (weight(xi1), weight(xi2));
    let denom = lambda * w1 + (1.0 - lambda) * w2;
    if !(denom > f64::MIN_POSITIVE) {
        return Err(Error::DenominatorVanished(denom));
    }
    let lambda_prime = (lambda * w1 / denom).clamp(0.0, 1.0);
    let mix = *xi1 * lambda + *xi2 * (1.0 - lambda);
    let lhs = propagate_exact(&mix, p, t)?;
    let rhs = propagate_exact(xi1, p, t)? * lambda_prime
        + propagate_exact(xi2, p, t)? * (1.0 - lambda_prime);
    Ok(ConvexityCheck {
        lambda_prime,
        map_residual: lhs.dist(&rhs),
    })
}

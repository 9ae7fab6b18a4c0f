//! Evolution engines for `ξ̇ = (2/√3)b + (2/√3)a∧ξ + (2/√3)b∗ξ − (4/√3)(b·ξ)ξ`:
//! closed forms for the special cases, the global propagator
//! `A(t) = exp(t(b·λ − i a·λ))`, and adaptive integration.

mod closed;
mod exact;
pub mod sampling;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::{dopri5, OdeOptions, OdeStats};
use crate::state_space::{classify, entropy, StateTag};
use crate::su3::expm::{is_diagonal, lambda_branch, LambdaBranch, EPS_CASE};
use crate::su3::structure::SQRT3;
use crate::su3::Vec8;

pub use closed::{
    closed_form, closed_form_unguarded, linearization, oracle_backed_cases, rational_limit,
    LinearizationPair,
};
pub use exact::{
    convexity_lambda, generator, propagate_exact, propagator, ConvexityCheck, FlowMap,
};

/// Special case of `(a, b)` with a closed-form solution, or `General`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseTag {
    LinearStarPos,
    LinearStarNeg,
    LinearNullCubic,
    LinearDiagonal,
    NonlinStarPos,
    NonlinStarNeg,
    NonlinNullCubic,
    NonlinDiagonal,
    Rational,
    General,
}

impl CaseTag {
    /// The nine closed-form cases.
    pub const SPECIAL: [CaseTag; 9] = [
        CaseTag::LinearStarPos,
        CaseTag::LinearStarNeg,
        CaseTag::LinearNullCubic,
        CaseTag::LinearDiagonal,
        CaseTag::NonlinStarPos,
        CaseTag::NonlinStarNeg,
        CaseTag::NonlinNullCubic,
        CaseTag::NonlinDiagonal,
        CaseTag::Rational,
    ];

    pub fn is_linear(self) -> bool {
        matches!(
            self,
            CaseTag::LinearStarPos
                | CaseTag::LinearStarNeg
                | CaseTag::LinearNullCubic
                | CaseTag::LinearDiagonal
        )
    }
}

/// Generators `H = a·λ`, `G = b·λ` and the detected case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolutionParams {
    a: Vec8,
    b: Vec8,
    case_tag: CaseTag,
}

impl EvolutionParams {
    pub fn new(a: Vec8, b: Vec8) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::NonFinite("evolution parameters"));
        }
        Ok(EvolutionParams {
            a,
            b,
            case_tag: detect_case(&a, &b),
        })
    }

    pub fn linear(a: Vec8) -> Result<Self> {
        Self::new(a, Vec8::ZERO)
    }

    pub fn a(&self) -> &Vec8 {
        &self.a
    }

    pub fn b(&self) -> &Vec8 {
        &self.b
    }

    pub fn case_tag(&self) -> CaseTag {
        self.case_tag
    }

    /// `max(|a|, |b|, 1)`; `1/scale` is the characteristic time.
    pub fn scale(&self) -> f64 {
        self.a.norm().max(self.b.norm()).max(1.0)
    }
}

fn negligible(v: &Vec8, reference: f64) -> bool {
    v.norm() <= EPS_CASE * reference.max(1.0)
}

pub fn detect_case(a: &Vec8, b: &Vec8) -> CaseTag {
    let (na, nb) = (a.norm(), b.norm());
    let a_zero = negligible(a, nb);
    let b_zero = negligible(b, na);
    if a_zero && b_zero {
        return CaseTag::LinearDiagonal;
    }
    if b_zero {
        return match lambda_branch(a) {
            LambdaBranch::StarPos => CaseTag::LinearStarPos,
            LambdaBranch::StarNeg => CaseTag::LinearStarNeg,
            LambdaBranch::NullCubic => CaseTag::LinearNullCubic,
            _ if is_diagonal(a) => CaseTag::LinearDiagonal,
            _ => CaseTag::General,
        };
    }
    if a_zero {
        return match lambda_branch(b) {
            LambdaBranch::StarPos => CaseTag::NonlinStarPos,
            LambdaBranch::StarNeg => CaseTag::NonlinStarNeg,
            LambdaBranch::NullCubic => CaseTag::NonlinNullCubic,
            _ if is_diagonal(b) => CaseTag::NonlinDiagonal,
            _ => CaseTag::General,
        };
    }
    let tol = EPS_CASE * na * na;
    if (na * na - nb * nb).abs() <= tol
        && a.dot(b).abs() <= tol
        && (a.star(a) - b.star(b)).norm() <= tol
        && a.star(b).norm() <= tol
    {
        return CaseTag::Rational;
    }
    CaseTag::General
}

/// Right-hand side of the qutrit Riccati system.
pub fn riccati_rhs(xi: &Vec8, p: &EvolutionParams) -> Vec8 {
    let (a, b) = (&p.a, &p.b);
    let k = 2.0 / SQRT3;
    (*b + a.wedge(xi) + b.star(xi)) * k - *xi * (2.0 * k * b.dot(xi))
}

/// Right-hand side of the qubit Riccati system `2b + 2a×ζ − 2(b·ζ)ζ`.
pub fn qubit_rhs(zeta: &[f64; 3], a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    let cross = [
        a[1] * zeta[2] - a[2] * zeta[1],
        a[2] * zeta[0] - a[0] * zeta[2],
        a[0] * zeta[1] - a[1] * zeta[0],
    ];
    let bz = b[0] * zeta[0] + b[1] * zeta[1] + b[2] * zeta[2];
    std::array::from_fn(|i| 2.0 * b[i] + 2.0 * cross[i] - 2.0 * bz * zeta[i])
}

/// Qubit state `ρ_q ⊕ 0` as a qutrit Bloch vector.
pub fn embed_qubit_state(zeta: &[f64; 3]) -> Vec8 {
    let h = SQRT3 / 2.0;
    Vec8::new([h * zeta[0], h * zeta[1], h * zeta[2], 0.0, 0.0, 0.0, 0.0, 0.5])
}

/// Qubit generator `(a₁, a₂, a₃)` as a qutrit generator.
pub fn embed_qubit_generator(a: &[f64; 3]) -> Vec8 {
    Vec8::new([a[0], a[1], a[2], 0.0, 0.0, 0.0, 0.0, 0.0])
}

/// Inverse of [`embed_qubit_state`] on its image.
pub fn project_qubit_state(xi: &Vec8) -> [f64; 3] {
    let k = 2.0 / SQRT3;
    [k * xi[0], k * xi[1], k * xi[2]]
}

/// Which engine produced a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Engine {
    ClosedForm,
    Exact,
    Ode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub engine: Engine,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub rhs_evaluations: usize,
    /// Samples classified `Invalid`.
    pub invalid_samples: usize,
    /// Largest `max(ξ² − 1, r_det − 1, 0)` over the samples.
    pub max_excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec8>,
    pub entropy: Option<Vec<f64>>,
    pub meta: TrajectoryMeta,
}

impl Trajectory {
    fn from_samples(times: Vec<f64>, states: Vec<Vec8>, engine: Engine, stats: OdeStats) -> Self {
        let mut invalid = 0;
        let mut excess: f64 = 0.0;
        for s in &states {
            let c = classify(s);
            if c.tag == StateTag::Invalid {
                invalid += 1;
            }
            excess = excess.max(c.r_ball - 1.0).max(c.r_det - 1.0);
        }
        Trajectory {
            times,
            states,
            entropy: None,
            meta: TrajectoryMeta {
                engine,
                accepted_steps: stats.accepted,
                rejected_steps: stats.rejected,
                rhs_evaluations: stats.evaluations,
                invalid_samples: invalid,
                max_excess: excess.max(0.0),
            },
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn all_valid(&self) -> bool {
        self.meta.invalid_samples == 0
    }

    pub fn last(&self) -> Option<&Vec8> {
        self.states.last()
    }

    /// Fills [`Trajectory::entropy`]; samples that fail validation get `NaN`.
    pub fn with_entropy(mut self) -> Self {
        self.entropy = Some(
            self.states
                .iter()
                .map(|s| entropy(s).unwrap_or(f64::NAN))
                .collect(),
        );
        self
    }
}

/// `samples` equally spaced times from 0 to `t_end` inclusive.
pub fn uniform_grid(t_end: f64, samples: usize) -> Vec<f64> {
    let n = samples.max(2) - 1;
    (0..=n).map(|k| t_end * k as f64 / n as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrateOptions {
    pub ode: OdeOptions,
    pub samples: usize,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        IntegrateOptions {
            ode: OdeOptions::default(),
            samples: 1001,
        }
    }
}

fn check_initial(xi0: &Vec8) -> Result<()> {
    if !xi0.is_finite() {
        return Err(Error::NonFinite("initial state"));
    }
    if !classify(xi0).is_valid() {
        return Err(Error::InvalidState);
    }
    Ok(())
}

/// Adaptive Dormand–Prince integration sampled on a uniform grid.
pub fn integrate(
    xi0: &Vec8,
    p: &EvolutionParams,
    t_end: f64,
    opts: &IntegrateOptions,
) -> Result<Trajectory> {
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::DomainError(format!("t_end must be positive, got {t_end}")));
    }
    integrate_on(xi0, p, &uniform_grid(t_end, opts.samples), &opts.ode)
}

/// As [`integrate`] on a caller-supplied ascending grid starting at `t ≥ 0`.
pub fn integrate_on(
    xi0: &Vec8,
    p: &EvolutionParams,
    grid: &[f64],
    opts: &OdeOptions,
) -> Result<Trajectory> {
    check_initial(xi0)?;
    let (ys, stats) = dopri5(
        |_, y: &[f64; 8]| riccati_rhs(&Vec8(*y), p).0,
        0.0,
        xi0.0,
        grid,
        opts,
    )?;
    Ok(Trajectory::from_samples(
        grid.to_vec(),
        ys.into_iter().map(Vec8).collect(),
        Engine::Ode,
        stats,
    ))
}

/// Samples an engine that is pointwise in time (closed form or propagator).
pub fn evolve_pointwise(
    xi0: &Vec8,
    p: &EvolutionParams,
    grid: &[f64],
    engine: Engine,
) -> Result<Trajectory> {
    check_initial(xi0)?;
    let states = grid
        .iter()
        .map(|&t| match engine {
            Engine::ClosedForm => closed_form(xi0, p, t),
            Engine::Exact => propagate_exact(xi0, p, t),
            Engine::Ode => unreachable!("ODE engine is not pointwise"),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory::from_samples(grid.to_vec(), states, engine, OdeStats::default()))
}

/// Qubit Riccati integration on a grid, used for the embedding regression.
pub fn integrate_qubit(
    zeta0: &[f64; 3],
    a: &[f64; 3],
    b: &[f64; 3],
    grid: &[f64],
    opts: &OdeOptions,
) -> Result<Vec<[f64; 3]>> {
    Ok(dopri5(|_, z: &[f64; 3]| qubit_rhs(z, a, b), 0.0, *zeta0, grid, opts)?.0)
}

#[cfg(test)]
mod tests;

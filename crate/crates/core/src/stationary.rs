//! Stationary solutions: closed-form catalogs per case, the `μa + νa∗a`
//! ansatz, the diagonal boundary curves, Jacobian stability, and a Newton
//! search for the general case.

use nalgebra::{Schur, SMatrix, SVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{propagate_exact, rational_limit, riccati_rhs, CaseTag, EvolutionParams};
use crate::random;
use crate::state_space::{classify, StateClass, StateTag, TOL_GEOM};
use crate::su3::structure::{bloch_to_density, bloch_unchecked, lambda_dot, SQRT3};
use crate::su3::{matrix_exp, Vec8};

type Mat8 = SMatrix<f64, 8, 8>;
type Col8 = SVector<f64, 8>;

/// Largest admissible `‖riccati_rhs‖` at a cataloged equilibrium.
pub const STATIONARY_TOL: f64 = 1e-9;
/// Real parts within this of zero count as neutral.
pub const TOL_EIG: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stability {
    AsymptoticallyStable,
    Unstable,
    Marginal,
}

/// Continuous family a cataloged representative was sampled from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Family {
    /// `direction / σ` for `σ > sigma_min`.
    Ray { direction: Vec8, sigma_min: f64 },
    /// `μ a + ν a∗a` with `a² μ² + |a|⁴ ν² = 1/3`, `0 < ν < 1/(2a²)`, sign of `μ` fixed.
    Arc { sign: f64 },
    /// Diagonal states `(ξ₃, ξ₈)` inside the closed triangle.
    DiagonalTriangle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub xi: Vec8,
    pub state_class: StateClass,
    pub stability: Stability,
    /// Formula that produced the point, e.g. `"b/|b|"`.
    pub source: String,
    pub family: Option<Family>,
    pub residual: f64,
}

/// Analytic Jacobian of [`riccati_rhs`] at `xi`.
pub fn jacobian(xi: &Vec8, p: &EvolutionParams) -> Mat8 {
    let (a, b) = (p.a(), p.b());
    let k = 2.0 / SQRT3;
    let bx = b.dot(xi);
    let mut m = Mat8::zeros();
    for j in 0..8 {
        let e = Vec8::e(j + 1);
        let col = (a.wedge(&e) + b.star(&e)) * k - (e * bx + *xi * b[j]) * (2.0 * k);
        for i in 0..8 {
            m[(i, j)] = col[i];
        }
    }
    m
}

fn col(v: &Vec8) -> Col8 {
    Col8::from_column_slice(v.as_array())
}

fn vec(c: &Col8) -> Vec8 {
    Vec8(std::array::from_fn(|i| c[i]))
}

/// Gauss–Newton projection onto the zero set of the right-hand side.
/// Returns `None` if it fails to converge.
pub fn newton_project(x0: &Vec8, p: &EvolutionParams) -> Option<Vec8> {
    let tol = 1e-13 * p.scale();
    let mut x = *x0;
    let mut r = riccati_rhs(&x, p).norm();
    for _ in 0..60 {
        if r <= tol {
            return Some(x);
        }
        let svd = jacobian(&x, p).svd(true, true);
        let eps = 1e-10 * svd.singular_values.max();
        let step = vec(&svd.solve(&col(&riccati_rhs(&x, p)), eps).ok()?);
        let mut damp = 1.0;
        loop {
            let trial = x - step * damp;
            let rt = riccati_rhs(&trial, p).norm();
            if rt < r || damp < 1e-4 {
                x = trial;
                r = rt;
                break;
            }
            damp *= 0.5;
        }
        if !x.is_finite() {
            return None;
        }
    }
    (r <= tol * 1e3).then_some(x)
}

/// Kernel directions of the Jacobian along which the equilibrium set
/// continues: a Newton projection from `ξ̄ + εv` moves only `O(ε²)`.
fn tangent_zero_modes(xi: &Vec8, p: &EvolutionParams, j: &Mat8) -> usize {
    let svd = j.svd(true, true);
    let v_t = svd.v_t.expect("requested");
    let scale = svd.singular_values.max().max(1.0);
    let eps = 1e-4;
    (0..8)
        .filter(|&k| svd.singular_values[k] <= TOL_EIG * scale)
        .filter(|&k| {
            let v = Vec8(std::array::from_fn(|i| v_t[(k, i)]));
            let x0 = *xi + v * eps;
            newton_project(&x0, p).is_some_and(|y| y.dist(&x0) <= 0.05 * eps)
        })
        .count()
}

/// Eigenvalues through a real Schur form with a bounded iteration count;
/// the unbounded variant can cycle on matrices with clustered spectra.
pub fn eigenvalues(m: &Mat8) -> Result<Vec<Complex64>> {
    for eps in [f64::EPSILON, 1e-14, 1e-12] {
        if let Some(s) = Schur::try_new(*m, eps, 10_000) {
            return Ok(s.complex_eigenvalues().iter().copied().collect());
        }
    }
    Err(Error::DomainError("Schur iteration did not converge".into()))
}

fn label(eigs: &[Complex64]) -> Stability {
    if eigs.iter().any(|z| z.re > TOL_EIG) {
        Stability::Unstable
    } else if !eigs.is_empty() && eigs.iter().all(|z| z.re < -TOL_EIG) {
        Stability::AsymptoticallyStable
    } else {
        Stability::Marginal
    }
}

/// Outcome of integrating perturbed initial conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationCheck {
    pub count: usize,
    pub radius: f64,
    pub horizon: f64,
    /// Largest `‖ξ(T) − ξ̄‖`.
    pub max_final_distance: f64,
    /// Largest `‖riccati_rhs(ξ(T))‖`.
    pub max_final_residual: f64,
}

impl PerturbationCheck {
    pub fn escaped(&self) -> bool {
        self.max_final_distance > 10.0 * self.radius
    }

    pub fn settled(&self) -> bool {
        !self.escaped() && self.max_final_residual <= 1e-8
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    /// Verdict after removing zero modes tangent to a continuum of equilibria.
    pub label: Stability,
    /// Verdict from the full spectrum.
    pub raw_label: Stability,
    pub eigenvalues: Vec<Complex64>,
    pub zero_modes: usize,
    pub perturbation: PerturbationCheck,
}

impl StabilityReport {
    /// Whether the perturbation run agrees with [`StabilityReport::label`].
    pub fn consistent(&self) -> bool {
        match self.label {
            Stability::AsymptoticallyStable => self.perturbation.settled(),
            Stability::Unstable => self.perturbation.escaped(),
            Stability::Marginal => !self.perturbation.escaped(),
        }
    }
}

fn spectrum(xi: &Vec8, p: &EvolutionParams) -> Result<(Vec<Complex64>, Stability, Stability, usize)> {
    let res = riccati_rhs(xi, p).norm();
    if !(res <= STATIONARY_TOL * p.scale()) {
        return Err(Error::NotStationary(res));
    }
    let j = jacobian(xi, p);
    let mut eigs = eigenvalues(&j)?;
    eigs.sort_by(|x, y| x.norm().total_cmp(&y.norm()));
    let zero_modes = tangent_zero_modes(xi, p, &j);
    let raw = label(&eigs);
    let restricted = label(&eigs[zero_modes.min(eigs.len())..]);
    Ok((eigs, raw, restricted, zero_modes))
}

/// Restricted Jacobian verdict at an equilibrium.
pub fn stability(xi: &Vec8, p: &EvolutionParams) -> Result<Stability> {
    Ok(spectrum(xi, p)?.2)
}

/// Unitary-plus-mixing perturbations of `ξ̄` that stay inside the state space.
fn perturb(xi: &Vec8, radius: f64, rng: &mut ChaCha8Rng) -> Vec8 {
    let h = lambda_dot(&random::unit_vec8(rng)).scale(Complex64::new(0.0, radius));
    let u = matrix_exp(&h).expect("small generator");
    let sigma = bloch_to_density(&random::state(rng));
    let w = radius * 0.5;
    let rho = bloch_to_density(xi).scale_re(1.0 - w) + sigma.scale_re(w);
    bloch_unchecked(&(u * rho * u.adjoint()))
}

pub fn stability_report(xi: &Vec8, p: &EvolutionParams) -> Result<StabilityReport> {
    let (eigs, raw_label, label, zero_modes) = spectrum(xi, p)?;
    let slowest = eigs[zero_modes.min(eigs.len())..]
        .iter()
        .map(|z| z.re.abs())
        .filter(|&r| r > TOL_EIG)
        .fold(f64::INFINITY, f64::min);
    let horizon = (30.0 / slowest.max(1e-2)).min(3000.0);
    let radius = 1e-3;
    let mut rng = ChaCha8Rng::seed_from_u64(0x57ab);
    let mut check = PerturbationCheck {
        count: 20,
        radius,
        horizon,
        max_final_distance: 0.0,
        max_final_residual: 0.0,
    };
    for _ in 0..check.count {
        let x0 = perturb(xi, radius, &mut rng);
        let x = propagate_exact(&x0, p, horizon)?;
        check.max_final_distance = check.max_final_distance.max(x.dist(xi));
        check.max_final_residual = check.max_final_residual.max(riccati_rhs(&x, p).norm());
    }
    Ok(StabilityReport {
        label,
        raw_label,
        eigenvalues: eigs,
        zero_modes,
        perturbation: check,
    })
}

fn entry(p: &EvolutionParams, xi: Vec8, source: &str, family: Option<Family>) -> Result<Equilibrium> {
    let residual = riccati_rhs(&xi, p).norm();
    Ok(Equilibrium {
        xi,
        state_class: classify(&xi),
        stability: stability(&xi, p)?,
        source: source.to_string(),
        family,
        residual,
    })
}

/// `σ` samples for the ray families: log-spaced in `(2, 100]`.
pub fn sigma_samples(n: usize) -> Vec<f64> {
    (1..=n).map(|k| 2.0 * 50f64.powf(k as f64 / n as f64)).collect()
}

/// `ν` samples for the interior arc, uniform in `(0, 1/(2a²))`.
pub fn arc_samples(a: &Vec8, n: usize) -> Vec<f64> {
    let top = 0.5 / a.norm_sq();
    (1..=n).map(|k| top * k as f64 / (n + 1) as f64).collect()
}

fn star_catalog(p: &EvolutionParams, v: &Vec8, sign: f64, nonlinear: bool, samples: usize) -> Result<Vec<Equilibrium>> {
    let u = *v / v.norm();
    let (name, pure, half) = match (nonlinear, sign > 0.0) {
        (false, true) => ("a", u, -u / 2.0),
        (false, false) => ("a", -u, u / 2.0),
        (true, true) => ("b", u, -u / 2.0),
        (true, false) => ("b", -u, u / 2.0),
    };
    let sgn = |x: &Vec8| if x.dot(&u) > 0.0 { "" } else { "-" };
    let mut out = vec![
        entry(p, pure, &format!("{}{name}/|{name}|", sgn(&pure)), None)?,
        entry(p, half, &format!("{}{name}/(2|{name}|)", sgn(&half)), None)?,
    ];
    if !nonlinear {
        for s in sigma_samples(samples) {
            let x = half * (2.0 / s);
            let fam = Family::Ray { direction: half * 2.0, sigma_min: 2.0 };
            out.push(entry(p, x, &format!("{}{name}/(σ|{name}|), σ = {s:.4}", sgn(&x)), Some(fam))?);
        }
    }
    Ok(out)
}

fn null_cubic_pure(v: &Vec8) -> [(Vec8, &'static str); 3] {
    let (n, vv) = (v.norm(), v.star(v));
    let n2 = n * n;
    [
        (*v * (SQRT3 / (2.0 * n)) + vv / (2.0 * n2), "√3 v/(2|v|) + v∗v/(2v²)"),
        (*v * (-SQRT3 / (2.0 * n)) + vv / (2.0 * n2), "-√3 v/(2|v|) + v∗v/(2v²)"),
        (-vv / n2, "-v∗v/v²"),
    ]
}

fn diagonal_pure() -> [(Vec8, &'static str); 3] {
    let h = SQRT3 / 2.0;
    [
        (Vec8::new([0.0, 0.0, h, 0.0, 0.0, 0.0, 0.0, 0.5]), "(0,0,√3/2,0,0,0,0,1/2)"),
        (Vec8::new([0.0, 0.0, -h, 0.0, 0.0, 0.0, 0.0, 0.5]), "(0,0,-√3/2,0,0,0,0,1/2)"),
        (-Vec8::e(8), "(0,0,0,0,0,0,0,-1)"),
    ]
}

fn diagonal_point(x3: f64, x8: f64) -> Vec8 {
    let mut v = Vec8::ZERO;
    v[2] = x3;
    v[7] = x8;
    v
}

/// Closed-form equilibria of the detected case. Continuous families are
/// represented by `samples` members each.
pub fn catalog_with(p: &EvolutionParams, samples: usize) -> Result<Vec<Equilibrium>> {
    let (a, b) = (p.a(), p.b());
    match p.case_tag() {
        CaseTag::LinearStarPos => star_catalog(p, a, 1.0, false, samples),
        CaseTag::LinearStarNeg => star_catalog(p, a, -1.0, false, samples),
        CaseTag::NonlinStarPos => star_catalog(p, b, 1.0, true, samples),
        CaseTag::NonlinStarNeg => star_catalog(p, b, -1.0, true, samples),
        CaseTag::LinearNullCubic => {
            let (n, aa) = (a.norm(), a.star(a));
            let n2 = n * n;
            let mut out = Vec::new();
            for (x, s) in null_cubic_pure(a) {
                out.push(entry(p, x, &s.replace('v', "a"), None)?);
            }
            for s in [1.0, -1.0] {
                out.push(entry(p, *a * (s / (SQRT3 * n)), if s > 0.0 { "a/(√3|a|)" } else { "-a/(√3|a|)" }, None)?);
            }
            for (s1, s2, name) in [
                (1.0, 1.0, "a/(2√3|a|) + a∗a/(2a²)"),
                (1.0, -1.0, "a/(2√3|a|) - a∗a/(2a²)"),
                (-1.0, 1.0, "-a/(2√3|a|) + a∗a/(2a²)"),
                (-1.0, -1.0, "-a/(2√3|a|) - a∗a/(2a²)"),
            ] {
                out.push(entry(p, *a * (s1 / (2.0 * SQRT3 * n)) + aa * (s2 / (2.0 * n2)), name, None)?);
            }
            for sign in [1.0, -1.0] {
                for nu in arc_samples(a, samples) {
                    let mu = sign * (1.0 / 3.0 - n2 * n2 * nu * nu).max(0.0).sqrt() / n;
                    out.push(entry(
                        p,
                        *a * mu + aa * nu,
                        &format!("μa + νa∗a, ν = {nu:.4}, μ = {mu:.4}"),
                        Some(Family::Arc { sign }),
                    )?);
                }
            }
            Ok(out)
        }
        CaseTag::LinearDiagonal => {
            let mut out = Vec::new();
            for (x, s) in diagonal_pure() {
                out.push(entry(p, x, s, None)?);
            }
            let fam = Some(Family::DiagonalTriangle);
            for (x3, x8) in diagonal_boundary(1.0 / 3.0)? {
                out.push(entry(p, diagonal_point(x3, x8), &format!("boundary κ = 1/3, ({x3:.4}, {x8:.4})"), fam)?);
            }
            for k in 0..samples {
                let r = 0.45 * k as f64 / samples.max(1) as f64;
                let th = 2.0 * std::f64::consts::PI * k as f64 / samples.max(1) as f64;
                let (x3, x8) = (r * th.cos(), r * th.sin());
                out.push(entry(p, diagonal_point(x3, x8), &format!("interior ({x3:.4}, {x8:.4})"), fam)?);
            }
            Ok(out)
        }
        CaseTag::NonlinNullCubic => null_cubic_pure(b)
            .into_iter()
            .map(|(x, s)| entry(p, x, &s.replace('v', "b"), None))
            .collect(),
        CaseTag::NonlinDiagonal => diagonal_pure().into_iter().map(|(x, s)| entry(p, x, s, None)).collect(),
        CaseTag::Rational => Ok(vec![entry(p, rational_limit(p)?, "(a∗a + a∧b)/(2a²)", None)?]),
        CaseTag::General => Err(Error::UnsupportedCase),
    }
}

pub fn catalog(p: &EvolutionParams) -> Result<Vec<Equilibrium>> {
    catalog_with(p, 5)
}

/// Options for [`numeric_equilibria`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Grid points per axis on `(μ, ν) ∈ [−2, 2]²`.
    pub grid: usize,
    pub random_seeds: usize,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            grid: 9,
            random_seeds: 40,
            seed: 1,
        }
    }
}

/// Damped Newton search for equilibria in the state space, for any case.
/// Seeds come from the ansatz grid built on `a` (or `b` when `a = 0`) and
/// from random states. Not guaranteed to be complete.
pub fn numeric_equilibria(p: &EvolutionParams, opts: &SearchOptions) -> Vec<Equilibrium> {
    let v = if p.a().norm() > 0.0 { *p.a() } else { *p.b() };
    let vv = v.star(&v);
    let mut seeds = Vec::new();
    if v.norm() > 0.0 {
        let g = opts.grid.max(2);
        for i in 0..g {
            for k in 0..g {
                let mu = -2.0 + 4.0 * i as f64 / (g - 1) as f64;
                let nu = -2.0 + 4.0 * k as f64 / (g - 1) as f64;
                seeds.push(v * mu + vv * nu);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    seeds.extend((0..opts.random_seeds).map(|_| random::state(&mut rng)));
    let mut found: Vec<Equilibrium> = Vec::new();
    for s in seeds {
        let Some(x) = newton_project(&s, p) else { continue };
        if !classify(&x).is_valid() || found.iter().any(|e| e.xi.dist(&x) < 1e-7) {
            continue;
        }
        if let Ok(e) = entry(p, x, "numeric", None) {
            found.push(e);
        }
    }
    found
}

/// Polynomials in `(μ, ν)` for `ξ = μa + νa∗a`, with `c = a·(a∗a)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnsatzPolynomials {
    /// `ξ² = a²μ² + |a|⁴ν² + 2cμν`.
    pub norm_sq: f64,
    /// Cubic `ξ·(ξ∗ξ)` as printed, with a `μν` term in place of `μν²`.
    pub cubic_printed: f64,
    /// Cubic `ξ·(ξ∗ξ) = cμ³ + (2c² − |a|⁶)ν³ + 3|a|⁴μ²ν + 3a²cμν²`.
    pub cubic: f64,
    /// `3ξ² − 2ξ·(ξ∗ξ)` in the printed form.
    pub r_det_printed: f64,
    pub r_det: f64,
}

impl AnsatzPolynomials {
    pub fn new(mu: f64, nu: f64, a: &Vec8) -> Self {
        let n2 = a.norm_sq();
        let c = a.dot(&a.star(a));
        let norm_sq = n2 * mu * mu + n2 * n2 * nu * nu + 2.0 * c * mu * nu;
        let head = c * mu.powi(3) + (2.0 * c * c - n2.powi(3)) * nu.powi(3) + 3.0 * n2 * n2 * mu * mu * nu;
        let cubic_printed = head + 3.0 * n2 * c * mu * nu;
        let cubic = head + 3.0 * n2 * c * mu * nu * nu;
        let r_det_printed = -2.0 * c * mu.powi(3) + 2.0 * (n2.powi(3) - 2.0 * c * c) * nu.powi(3)
            - 6.0 * n2 * n2 * mu * mu * nu
            + 3.0 * n2 * mu * mu
            + 3.0 * n2 * n2 * nu * nu
            + 6.0 * c * (1.0 - n2) * mu * nu;
        AnsatzPolynomials {
            norm_sq,
            cubic_printed,
            cubic,
            r_det_printed,
            r_det: 3.0 * norm_sq - 2.0 * cubic,
        }
    }

    fn tag(norm_sq: f64, cubic: f64, r_det: f64, tol: f64) -> StateTag {
        if (norm_sq - 1.0).abs() <= tol && (cubic - 1.0).abs() <= tol {
            StateTag::PureBoundary
        } else if norm_sq > 1.0 + tol || r_det > 1.0 + tol {
            StateTag::Invalid
        } else if (r_det - 1.0).abs() <= tol {
            StateTag::MixedBoundary
        } else {
            StateTag::Interior
        }
    }

    pub fn printed_tag(&self) -> StateTag {
        Self::tag(self.norm_sq, self.cubic_printed, self.r_det_printed, TOL_GEOM)
    }

    pub fn corrected_tag(&self) -> StateTag {
        Self::tag(self.norm_sq, self.cubic, self.r_det, TOL_GEOM)
    }
}

/// Classification of `μa + νa∗a` from the invariants of the vector itself.
/// A disagreement with the printed polynomials is logged, not resolved.
pub fn ansatz_classify(mu: f64, nu: f64, a: &Vec8) -> Result<StateClass> {
    if !(a.norm() > 0.0) || !mu.is_finite() || !nu.is_finite() {
        return Err(Error::DomainError("ansatz needs finite μ, ν and a ≠ 0".into()));
    }
    let class = classify(&(*a * mu + a.star(a) * nu));
    let printed = AnsatzPolynomials::new(mu, nu, a).printed_tag();
    if printed != class.tag {
        log::debug!("ansatz (μ={mu}, ν={nu}): printed polynomials give {printed:?}, invariants give {:?}", class.tag);
    }
    Ok(class)
}

/// Mixed-boundary points `(ξ₃, ξ₈)` with `ξ₃² + ξ₈² = κ`, i.e. the
/// intersections of that circle with the edges of the diagonal triangle.
/// Empty for `κ < 1/4`, where the circle lies inside the incircle.
pub fn diagonal_boundary(kappa: f64) -> Result<Vec<(f64, f64)>> {
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(Error::DomainError(format!("κ = {kappa} outside (0, 1)")));
    }
    // 8ξ₈³ − 6κξ₈ + 3κ − 1 = 0
    if kappa < 0.25 - 1e-15 {
        return Ok(Vec::new());
    }
    let cos_alpha = ((1.0 - 3.0 * kappa) / (2.0 * kappa.powf(1.5))).clamp(-1.0, 1.0);
    let alpha = cos_alpha.acos();
    let r = kappa.sqrt();
    let mut out: Vec<(f64, f64)> = Vec::new();
    for k in 0..3 {
        let x8 = r * (alpha / 3.0 - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
        let x3 = (kappa - x8 * x8).max(0.0).sqrt();
        for pt in [(x3, x8), (-x3, x8)] {
            if !out.iter().any(|q| (q.0 - pt.0).abs() < 1e-12 && (q.1 - pt.1).abs() < 1e-12) {
                out.push(pt);
            }
        }
    }
    Ok(out)
}

/// Strict interior of the diagonal triangle; points within [`TOL_GEOM`] of
/// an edge count as boundary.
pub fn triangle_membership(x3: f64, x8: f64) -> bool {
    let k = x3 * x3 + x8 * x8;
    k < 1.0 - TOL_GEOM && 2.0 * x8.powi(3) - 6.0 * x3 * x3 * x8 + 3.0 * k < 1.0 - TOL_GEOM
}

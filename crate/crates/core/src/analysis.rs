//! Post-processing of sampled trajectories: Poincaré sections, recurrence and
//! convergence classification, generator frequencies and entropy series.

use nalgebra::{Matrix3, Schur};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{generator, riccati_rhs, EvolutionParams, FlowMap, Trajectory};
use crate::state_space::{entropy_of_spectrum, hermitian_spectrum, LogBase};
use crate::su3::Vec8;

/// Fraction of samples treated as the asymptotic tail.
pub const TAIL_FRACTION: f64 = 0.25;
pub const STATIONARY_VARIATION: f64 = 1e-8;
pub const CONVERGENCE_VARIATION: f64 = 1e-6;
/// Residual `‖ξ̇‖ / scale` accepted for a converged tail point.
pub const CONVERGENCE_RESIDUAL: f64 = 1e-5;
pub const RECURRENCE_TOL: f64 = 1e-6;
pub const CROSSING_TOL: f64 = 1e-9;
pub const CLUSTER_RADIUS: f64 = 1e-5;
pub const MAX_PERIODIC_CLUSTERS: usize = 32;
/// Required span in units of `1 / scale`.
pub const MIN_CHARACTERISTIC_TIMES: f64 = 50.0;

/// Return steps at or below this are noise for the monotonicity test.
const RETURN_FLOOR: f64 = 1e-8;
const PLANE_TOL: f64 = 1e-12;
const MAX_CANDIDATES: usize = 8;
const MAX_REFS: usize = 128;
const REFINE_REFS: usize = 16;
const MAX_SUBHARMONIC: usize = 64;
const MAX_DENOMINATOR: i64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CrossingSense {
    Positive,
    Negative,
    #[default]
    Both,
}

/// Hyperplane `n·(ξ − ξ⁽⁰⁾) = 0` with a crossing sense.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionSpec {
    normal: Vec8,
    point: Vec8,
    sense: CrossingSense,
}

impl SectionSpec {
    pub fn new(normal: Vec8, point: Vec8, sense: CrossingSense) -> Result<Self> {
        if !normal.is_finite() || !point.is_finite() {
            return Err(Error::NonFinite("section"));
        }
        if !(normal.norm() > 0.0) {
            return Err(Error::DomainError("section normal must be nonzero".into()));
        }
        Ok(SectionSpec {
            normal,
            point,
            sense,
        })
    }

    pub fn normal(&self) -> &Vec8 {
        &self.normal
    }

    pub fn point(&self) -> &Vec8 {
        &self.point
    }

    pub fn sense(&self) -> CrossingSense {
        self.sense
    }

    pub fn signed_distance(&self, xi: &Vec8) -> f64 {
        self.normal.dot(&(*xi - self.point))
    }

    /// Plane through `xi` orthogonal to the flow there; `None` at equilibria.
    pub fn transversal(xi: &Vec8, p: &EvolutionParams) -> Option<Self> {
        let v = riccati_rhs(xi, p);
        let n = v.norm();
        (n > 1e-12).then(|| SectionSpec {
            normal: v * (1.0 / n),
            point: *xi,
            sense: CrossingSense::Positive,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub t: f64,
    pub xi: Vec8,
    /// `Positive` or `Negative`.
    pub sense: CrossingSense,
    /// `|n·(ξ − ξ⁽⁰⁾)|`.
    pub residual: f64,
}

fn hermite(y0: &Vec8, y1: &Vec8, m0: &Vec8, m1: &Vec8, h: f64, s: f64) -> Vec8 {
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    *y0 * h00 + *m0 * (h * h10) + *y1 * h01 + *m1 * (h * h11)
}

/// Newton on `n·(Φ_τ(y0) − ξ⁽⁰⁾) = 0` in `τ`, seeded by the Hermite root.
fn polish(y0: &Vec8, tau: f64, h: f64, spec: &SectionSpec, p: &EvolutionParams) -> Option<(f64, Vec8)> {
    let mut tau = tau;
    let mut best: Option<(f64, Vec8, f64)> = None;
    for _ in 0..6 {
        let xi = FlowMap::new(p, tau).ok()?.apply(y0).ok()?;
        let r = spec.signed_distance(&xi);
        if best.map_or(true, |b| r.abs() < b.2) {
            best = Some((tau, xi, r.abs()));
        }
        if r.abs() <= 1e-14 {
            break;
        }
        let dr = spec.normal.dot(&riccati_rhs(&xi, p));
        if dr == 0.0 {
            break;
        }
        tau -= r / dr;
        if !(-0.5 * h..=1.5 * h).contains(&tau) {
            break;
        }
    }
    best.map(|(t, xi, _)| (t, xi))
}

/// Transversal crossings of the section, located by cubic Hermite
/// interpolation between bracketing samples and polished with the flow map.
pub fn poincare(traj: &Trajectory, p: &EvolutionParams, spec: &SectionSpec) -> Result<Vec<Crossing>> {
    let g: Vec<f64> = traj.states.iter().map(|s| spec.signed_distance(s)).collect();
    if g.len() >= 2 && g.iter().all(|v| v.abs() <= PLANE_TOL * spec.normal.norm()) {
        return Err(Error::DegenerateSection);
    }
    let mut out = Vec::new();
    for k in 0..g.len().saturating_sub(1) {
        let sense = if g[k] < 0.0 && g[k + 1] >= 0.0 {
            CrossingSense::Positive
        } else if g[k] > 0.0 && g[k + 1] <= 0.0 {
            CrossingSense::Negative
        } else {
            continue;
        };
        if spec.sense != CrossingSense::Both && spec.sense != sense {
            continue;
        }
        let (t0, t1) = (traj.times[k], traj.times[k + 1]);
        let h = t1 - t0;
        let (y0, y1) = (&traj.states[k], &traj.states[k + 1]);
        let (m0, m1) = (riccati_rhs(y0, p), riccati_rhs(y1, p));
        // q(lo) < 0 ≤ q(hi) after orientation
        let sign = if sense == CrossingSense::Positive { 1.0 } else { -1.0 };
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..64 {
            let mid = 0.5 * (lo + hi);
            if sign * spec.signed_distance(&hermite(y0, y1, &m0, &m1, h, mid)) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let s = 0.5 * (lo + hi);
        let mut t = t0 + s * h;
        let mut xi = hermite(y0, y1, &m0, &m1, h, s);
        if let Some((tau, polished)) = polish(y0, s * h, h, spec, p) {
            if spec.signed_distance(&polished).abs() < CROSSING_TOL {
                t = t0 + tau;
                xi = polished;
            }
        }
        out.push(Crossing {
            t,
            xi,
            sense,
            residual: spec.signed_distance(&xi).abs(),
        });
    }
    Ok(out)
}

/// Von Neumann entropy (base 3) per sample, eigenvalues clamped to `[0, 1]`;
/// slightly invalid samples are not rejected.
pub fn entropy_series(traj: &Trajectory) -> Vec<f64> {
    traj.states
        .iter()
        .map(|s| entropy_of_spectrum(&hermitian_spectrum(s), LogBase::Three))
        .collect()
}

/// `max − min` over the final `fraction` of `values`.
pub fn tail_amplitude(values: &[f64], fraction: f64) -> f64 {
    let start = tail_start(values.len(), fraction);
    let tail = &values[start..];
    let max = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = tail.iter().copied().fold(f64::INFINITY, f64::min);
    if tail.is_empty() {
        0.0
    } else {
        max - min
    }
}

fn tail_start(n: usize, fraction: f64) -> usize {
    let k = ((n as f64) * (1.0 - fraction)).floor() as usize;
    k.min(n.saturating_sub(1))
}

/// Eigenvalues of `b·λ − i a·λ`, or `None` if the Schur iteration stalls.
pub fn generator_spectrum(p: &EvolutionParams) -> Option<[Complex64; 3]> {
    let k = generator(p);
    let m = Matrix3::from_fn(|i, j| k.m[i][j]);
    for eps in [f64::EPSILON, 1e-14, 1e-12] {
        if let Some(s) = Schur::try_new(m, eps, 10_000) {
            let t = s.unpack().1;
            return Some([t[(0, 0)], t[(1, 1)], t[(2, 2)]]);
        }
    }
    None
}

/// Angular frequencies surviving at long times: differences of imaginary
/// parts within the class of eigenvalues of maximal real part.
pub fn asymptotic_frequencies(p: &EvolutionParams) -> Vec<f64> {
    let Some(mu) = generator_spectrum(p) else {
        return Vec::new();
    };
    let tol = 1e-9 * p.scale();
    let top = mu.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let class: Vec<f64> = mu.iter().filter(|z| z.re >= top - tol).map(|z| z.im).collect();
    let mut w = Vec::new();
    for i in 0..class.len() {
        for j in i + 1..class.len() {
            let d = (class[i] - class[j]).abs();
            if d > tol && w.iter().all(|x: &f64| (x - d).abs() > tol) {
                w.push(d);
            }
        }
    }
    w.sort_by(f64::total_cmp);
    w
}

/// Best rational approximation with denominator at most `MAX_DENOMINATOR`.
fn is_rational(x: f64, tol: f64) -> bool {
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut r = x;
    for _ in 0..32 {
        let a = r.floor();
        if a.abs() > 1e12 {
            break;
        }
        let a = a as i64;
        let (h2, k2) = (a * h1 + h0, a * k1 + k0);
        if k2 > MAX_DENOMINATOR {
            break;
        }
        if (x - h2 as f64 / k2 as f64).abs() <= tol * x.abs().max(1.0) {
            return true;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    false
}

/// Rank over the rationals of the frequency set. Differences of three
/// eigenvalues span at most two dimensions, so the result is 0, 1 or 2.
pub fn independent_frequency_count(freqs: &[f64]) -> usize {
    match freqs.first() {
        None => 0,
        Some(&w0) if freqs.iter().all(|&w| is_rational(w / w0, 1e-9)) => 1,
        Some(_) => 2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrajectoryLabel {
    Stationary,
    Periodic,
    QuasiPeriodic,
    ConvergentToEquilibrium,
    LimitCycle,
}

/// Measurements behind a label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassEvidence {
    /// `max ‖ξ_k − ξ_0‖`.
    pub total_variation: f64,
    /// `max ‖ξ_k − ξ_last‖` over the tail.
    pub tail_variation: f64,
    /// `‖ξ̇(ξ_last)‖`.
    pub tail_residual: f64,
    /// `max ‖Φ_T(ξ_k) − ξ_k‖` over tail samples.
    pub recurrence_residual: Option<f64>,
    /// `‖Φ_T(ξ_0) − ξ_0‖`.
    pub start_recurrence: Option<f64>,
    pub crossings: usize,
    /// Clusters of radius `CLUSTER_RADIUS` among tail crossings.
    pub section_clusters: usize,
    /// The second half of tail crossings opened new clusters.
    pub clusters_growing: bool,
    /// `‖P_{j+1} − P_j‖` for successive section returns.
    pub return_steps: Vec<f64>,
    /// Return steps never grow while above the noise floor.
    pub monotone_contraction: bool,
    pub frequencies: Vec<f64>,
    pub independent_frequencies: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryClass {
    pub label: TrajectoryLabel,
    pub period_estimate: Option<f64>,
    pub limit_point: Option<Vec8>,
    pub evidence: ClassEvidence,
}

fn evenly(lo: usize, hi: usize, count: usize) -> Vec<usize> {
    if hi <= lo {
        return Vec::new();
    }
    let n = hi - lo;
    if n <= count {
        return (lo..hi).collect();
    }
    (0..count).map(|j| lo + j * (n - 1) / (count - 1)).collect()
}

fn recurrence(p: &EvolutionParams, period: f64, refs: &[Vec8]) -> Option<f64> {
    let flow = FlowMap::new(p, period).ok()?;
    refs.iter().try_fold(0.0f64, |acc, x| Some(acc.max(flow.apply(x).ok()?.dist(x))))
}

/// Gauss–Newton on `Σ‖Φ_T(ξ_k) − ξ_k‖²` with `d/dT Φ_T = ξ̇`, kept in `[lo, hi]`.
fn refine_period(p: &EvolutionParams, t0: f64, lo: f64, hi: f64, refs: &[Vec8]) -> Option<f64> {
    let mut t = t0;
    for _ in 0..12 {
        let flow = FlowMap::new(p, t).ok()?;
        let (mut num, mut den) = (0.0, 0.0);
        for x in refs {
            let y = flow.apply(x).ok()?;
            let v = riccati_rhs(&y, p);
            num += v.dot(&(y - *x));
            den += v.dot(&v);
        }
        if den == 0.0 {
            break;
        }
        let next = (t - num / den).clamp(lo, hi);
        let step = (next - t).abs();
        t = next;
        if step <= 1e-15 * t.abs().max(1.0) {
            break;
        }
    }
    Some(t)
}

/// Smallest recurrence time of the tail, if any, with its residual.
fn detect_period(traj: &Trajectory, p: &EvolutionParams, i0: usize) -> Option<(f64, f64)> {
    let n = traj.len();
    let refs_idx = evenly(i0, n, MAX_REFS);
    let max_lag = (n / 2).min(i0);
    if max_lag < 3 || refs_idx.is_empty() {
        return None;
    }
    let d: Vec<f64> = (0..=max_lag)
        .map(|m| {
            let s: f64 = refs_idx
                .iter()
                .map(|&k| traj.states[k].dist(&traj.states[k - m]).powi(2))
                .sum();
            (s / refs_idx.len() as f64).sqrt()
        })
        .collect();
    let mut minima: Vec<usize> = (2..max_lag).filter(|&m| d[m] <= d[m - 1] && d[m] < d[m + 1]).collect();
    minima.sort_by(|&x, &y| d[x].total_cmp(&d[y]));
    minima.truncate(MAX_CANDIDATES);

    let refs: Vec<Vec8> = refs_idx.iter().map(|&k| traj.states[k]).collect();
    let coarse: Vec<Vec8> = evenly(0, refs.len(), REFINE_REFS).into_iter().map(|k| refs[k]).collect();
    let lag_time = |m: usize| traj.times[n - 1] - traj.times[n - 1 - m];
    let dt = lag_time(1);

    let try_period = |guess: f64, width: f64| -> Option<(f64, f64)> {
        let lo = (guess - width).max(0.5 * dt);
        let t = refine_period(p, guess, lo, guess + width, &coarse)?;
        let r = recurrence(p, t, &refs)?;
        (r < RECURRENCE_TOL).then_some((t, r))
    };

    let mut found = minima
        .iter()
        .filter_map(|&m| try_period(lag_time(m), 1.5 * dt))
        .min_by(|x, y| x.0.total_cmp(&y.0))?;
    for j in (2..=MAX_SUBHARMONIC).rev() {
        let guess = found.0 / j as f64;
        if guess < 2.0 * dt {
            continue;
        }
        if let Some(hit) = try_period(guess, 1.5 * dt) {
            found = hit;
            break;
        }
    }
    Some(found)
}

fn clusters(points: &[Vec8]) -> usize {
    let mut centers: Vec<Vec8> = Vec::new();
    for x in points {
        if centers.iter().all(|c| c.dist(x) > CLUSTER_RADIUS) {
            centers.push(*x);
        }
    }
    centers.len()
}

/// Classifies with the transversal section through the final sample.
pub fn classify_trajectory(traj: &Trajectory, p: &EvolutionParams) -> Result<TrajectoryClass> {
    classify_with_section(traj, p, None)
}

pub fn classify_with_section(
    traj: &Trajectory,
    p: &EvolutionParams,
    section: Option<&SectionSpec>,
) -> Result<TrajectoryClass> {
    let n = traj.len();
    let required = MIN_CHARACTERISTIC_TIMES / p.scale();
    let span = if n >= 2 { traj.times[n - 1] - traj.times[0] } else { 0.0 };
    if n < 8 || span < required {
        return Err(Error::InsufficientSpan { span, required });
    }
    let first = traj.states[0];
    let last = traj.states[n - 1];
    let i0 = tail_start(n, TAIL_FRACTION);
    let total_variation = traj.states.iter().map(|x| x.dist(&first)).fold(0.0, f64::max);
    let tail_variation = traj.states[i0..].iter().map(|x| x.dist(&last)).fold(0.0, f64::max);
    let tail_residual = riccati_rhs(&last, p).norm();
    let frequencies = asymptotic_frequencies(p);
    let mut ev = ClassEvidence {
        total_variation,
        tail_variation,
        tail_residual,
        recurrence_residual: None,
        start_recurrence: None,
        crossings: 0,
        section_clusters: 0,
        clusters_growing: false,
        return_steps: Vec::new(),
        monotone_contraction: false,
        independent_frequencies: independent_frequency_count(&frequencies),
        frequencies,
    };
    let done = |label, period_estimate, limit_point, evidence| {
        Ok(TrajectoryClass {
            label,
            period_estimate,
            limit_point,
            evidence,
        })
    };

    if total_variation < STATIONARY_VARIATION {
        return done(TrajectoryLabel::Stationary, None, Some(first), ev);
    }
    if tail_variation < CONVERGENCE_VARIATION && tail_residual < CONVERGENCE_RESIDUAL * p.scale() {
        return done(TrajectoryLabel::ConvergentToEquilibrium, None, Some(last), ev);
    }

    let section = match section {
        Some(s) => Some(*s),
        None => SectionSpec::transversal(&last, p),
    };
    if let Some(spec) = section {
        let cross = match poincare(traj, p, &spec) {
            Ok(c) => c,
            Err(Error::DegenerateSection) => Vec::new(),
            Err(e) => return Err(e),
        };
        ev.crossings = cross.len();
        let t_tail = traj.times[i0];
        let tail: Vec<Vec8> = cross.iter().filter(|c| c.t >= t_tail).map(|c| c.xi).collect();
        ev.section_clusters = clusters(&tail);
        ev.clusters_growing = clusters(&tail[..tail.len() / 2]) < ev.section_clusters;
        ev.return_steps = cross.windows(2).map(|w| w[1].xi.dist(&w[0].xi)).collect();
        ev.monotone_contraction = ev.return_steps.len() >= 2
            && ev
                .return_steps
                .windows(2)
                .all(|w| w[0] <= RETURN_FLOOR || w[1] <= w[0]);
    }

    if let Some((period, residual)) = detect_period(traj, p, i0) {
        ev.recurrence_residual = Some(residual);
        let start = recurrence(p, period, &[first]);
        ev.start_recurrence = start;
        let from_start = start.is_some_and(|r| r < RECURRENCE_TOL);
        let converging = ev.return_steps.first().is_some_and(|&s| s > RECURRENCE_TOL)
            && ev.return_steps.last().is_some_and(|&s| s < RECURRENCE_TOL);
        let label = if !from_start && converging {
            TrajectoryLabel::LimitCycle
        } else {
            TrajectoryLabel::Periodic
        };
        return done(label, Some(period), None, ev);
    }
    done(TrajectoryLabel::QuasiPeriodic, None, None, ev)
}

#[cfg(test)]
mod tests;

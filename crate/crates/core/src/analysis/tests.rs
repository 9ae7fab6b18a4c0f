use super::*;
use crate::evolution::{evolve_pointwise, integrate, uniform_grid, Engine, IntegrateOptions};
use crate::state_space::entropy;
use crate::stationary::catalog;
use crate::su3::structure::SQRT3;
use proptest::prelude::*;

const H: f64 = SQRT3 / 2.0;

fn v(x: [f64; 8]) -> Vec8 {
    Vec8::new(x)
}

fn exact(a: [f64; 8], b: [f64; 8], xi0: [f64; 8], t_end: f64, samples: usize) -> (Trajectory, EvolutionParams) {
    let p = EvolutionParams::new(v(a), v(b)).unwrap();
    let tr = evolve_pointwise(&v(xi0), &p, &uniform_grid(t_end, samples), Engine::Exact).unwrap();
    (tr, p)
}

const FIG1_A: [f64; 8] = [0.0, 1.0, 0.0, -1.0, 0.3, 0.0, 1.0, 0.0];
const FIG1_XI: [f64; 8] = [0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.5];
const FIG2_A: [f64; 8] = [1.0, 0.0, 1.0, 1.0, -1.0, 1.0, 1.0, 0.0];
const FIG5_A: [f64; 8] = [1.0, 1.0, 0.0, 2.0, -2.0, 1.0, 0.0, 0.0];
const FIG5_B: [f64; 8] = [0.0, 0.0, H, 0.0, 0.0, 0.0, 0.0, 0.5];
const NORTH: [f64; 8] = [0.0, 0.0, H, 0.0, 0.0, 0.0, 0.0, 0.5];
const ZERO: [f64; 8] = [0.0; 8];

fn fig1_section() -> SectionSpec {
    SectionSpec::new(Vec8::e(2), Vec8::ZERO, CrossingSense::Both).unwrap()
}

#[test]
fn section_rejects_zero_normal() {
    assert!(SectionSpec::new(Vec8::ZERO, Vec8::ZERO, CrossingSense::Both).is_err());
}

#[test]
fn never_crossing_gives_empty_list() {
    let (tr, p) = exact(FIG2_A, ZERO, NORTH, 10.0, 201);
    let far = SectionSpec::new(Vec8::e(1), v([5.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]), CrossingSense::Both).unwrap();
    assert!(poincare(&tr, &p, &far).unwrap().is_empty());
}

#[test]
fn trajectory_in_plane_is_degenerate() {
    // stationary pure state lies in every plane through it
    let (tr, p) = exact([0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0], ZERO, NORTH, 5.0, 50);
    let s = SectionSpec::new(Vec8::e(1), Vec8::ZERO, CrossingSense::Both).unwrap();
    assert_eq!(poincare(&tr, &p, &s), Err(Error::DegenerateSection));
}

#[test]
fn crossings_lie_on_plane_and_survive_refinement() {
    let (coarse, p) = exact(FIG1_A, ZERO, FIG1_XI, 60.0, 1201);
    let (fine, _) = exact(FIG1_A, ZERO, FIG1_XI, 60.0, 2401);
    let s = fig1_section();
    let c1 = poincare(&coarse, &p, &s).unwrap();
    let c2 = poincare(&fine, &p, &s).unwrap();
    assert!(c1.len() > 10);
    assert_eq!(c1.len(), c2.len());
    for (x, y) in c1.iter().zip(&c2) {
        assert!(x.residual < CROSSING_TOL, "{}", x.residual);
        assert!(x.xi.dist(&y.xi) < 1e-7, "{}", x.xi.dist(&y.xi));
        assert_eq!(x.sense, y.sense);
    }
}

#[test]
fn crossing_sense_filters() {
    let (tr, p) = exact(FIG1_A, ZERO, FIG1_XI, 40.0, 801);
    let n = |sense| {
        let s = SectionSpec::new(Vec8::e(2), Vec8::ZERO, sense).unwrap();
        poincare(&tr, &p, &s).unwrap().len()
    };
    let (pos, neg, both) = (n(CrossingSense::Positive), n(CrossingSense::Negative), n(CrossingSense::Both));
    assert_eq!(pos + neg, both);
    assert!(pos.abs_diff(neg) <= 1);
}

#[test]
fn periodic_section_points_repeat() {
    let (tr, p) = exact(FIG2_A, ZERO, NORTH, 60.0, 3001);
    let s = SectionSpec::new(Vec8::e(1), Vec8::ZERO, CrossingSense::Positive).unwrap();
    let c = poincare(&tr, &p, &s).unwrap();
    assert!(c.len() > 10);
    let pts: Vec<Vec8> = c.iter().map(|x| x.xi).collect();
    assert_eq!(clusters(&pts), clusters(&pts[..pts.len() / 2]));
    assert!(clusters(&pts) <= MAX_PERIODIC_CLUSTERS);
}

#[test]
fn fig1_is_quasi_periodic() {
    let (tr, p) = exact(FIG1_A, ZERO, FIG1_XI, 400.0, 16001);
    let c = classify_with_section(&tr, &p, Some(&fig1_section())).unwrap();
    assert_eq!(c.label, TrajectoryLabel::QuasiPeriodic, "{c:?}");
    assert!(c.evidence.clusters_growing);
    assert!(c.evidence.section_clusters > MAX_PERIODIC_CLUSTERS);
    assert_eq!(c.evidence.independent_frequencies, 2);
    let pts = poincare(&tr, &p, &fig1_section()).unwrap();
    assert!(pts.iter().all(|x| x.xi.norm() <= 1.0 + 1e-9));
}

#[test]
fn fig2_is_periodic() {
    let (tr, p) = exact(FIG2_A, ZERO, NORTH, 100.0, 5001);
    let c = classify_trajectory(&tr, &p).unwrap();
    assert_eq!(c.label, TrajectoryLabel::Periodic, "{c:?}");
    let t = c.period_estimate.unwrap();
    assert!((t - 2.0 * std::f64::consts::PI / 6f64.sqrt()).abs() < 1e-9, "{t}");
    assert_eq!(c.evidence.independent_frequencies, 1);
}

#[test]
fn fig3_right_is_periodic() {
    let a = [0.0, 0.0, SQRT3, 0.0, 0.0, 0.0, 0.0, 0.5];
    let (tr, p) = exact(a, ZERO, [0.1; 8], 150.0, 7501);
    let c = classify_trajectory(&tr, &p).unwrap();
    assert_eq!(c.label, TrajectoryLabel::Periodic, "{c:?}");
    let t = c.period_estimate.unwrap();
    assert!((t - 4.0 * std::f64::consts::PI / SQRT3).abs() < 1e-9, "{t}");
}

#[test]
fn fig3_left_has_two_frequencies() {
    let (tr, p) = exact([0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.5], ZERO, [0.1; 8], 400.0, 8001);
    let c = classify_trajectory(&tr, &p).unwrap();
    assert_eq!(c.label, TrajectoryLabel::QuasiPeriodic, "{c:?}");
    assert_eq!(c.evidence.independent_frequencies, 2);
}

#[test]
fn fig5_is_limit_cycle_with_contracting_returns() {
    let (tr, p) = exact(FIG5_A, FIG5_B, [0.0, 0.0, -H, 0.0, 0.0, 0.0, 0.0, 0.5], 60.0, 6001);
    let c = classify_trajectory(&tr, &p).unwrap();
    assert_eq!(c.label, TrajectoryLabel::LimitCycle, "{c:?}");
    assert!(c.evidence.monotone_contraction, "{:?}", c.evidence.return_steps);
    let w = c.evidence.frequencies[0];
    assert!((c.period_estimate.unwrap() - 2.0 * std::f64::consts::PI / w).abs() < 1e-9);
}

#[test]
fn classification_stable_under_doubling() {
    for (a, b, xi, t) in [
        (FIG2_A, ZERO, NORTH, 50.0),
        (FIG5_A, FIG5_B, [0.0, 0.0, -H, 0.0, 0.0, 0.0, 0.0, 0.5], 40.0),
        (FIG5_A, FIG5_B, ZERO, 40.0),
    ] {
        let (t1, p) = exact(a, b, xi, t, (t * 50.0) as usize + 1);
        let (t2, _) = exact(a, b, xi, 2.0 * t, (t * 100.0) as usize + 1);
        let c1 = classify_trajectory(&t1, &p).unwrap();
        let c2 = classify_trajectory(&t2, &p).unwrap();
        assert_eq!(c1.label, c2.label);
    }
}

#[test]
fn fig6_converges_to_caption_point() {
    let a = [1.0, 0.0, -1.0, 0.0, 2.0, -1.0, 1.0, -1.0];
    let (tr, p) = exact(a, [0.1; 8], NORTH, 600.0, 6001);
    let c = classify_trajectory(&tr, &p).unwrap();
    assert_eq!(c.label, TrajectoryLabel::ConvergentToEquilibrium, "{c:?}");
    let target = v([0.284966, -0.168841, -0.042086, -0.035279, 0.556160, -0.356250, 0.522711, -0.421682]);
    assert!((c.limit_point.unwrap() - target).max_abs() < 1e-4);
    let s = entropy_series(&tr);
    assert!(s.iter().all(|x| x.abs() < 1e-6));
}

#[test]
fn equilibrium_start_is_stationary() {
    let b = v(FIG5_B);
    let p = EvolutionParams::new(Vec8::ZERO, b).unwrap();
    let eq = catalog(&p).unwrap()[0].xi;
    let tr = evolve_pointwise(&eq, &p, &uniform_grid(100.0, 101), Engine::Exact).unwrap();
    let c = classify_trajectory(&tr, &p).unwrap();
    assert_eq!(c.label, TrajectoryLabel::Stationary);
    assert!(c.limit_point.unwrap().dist(&eq) < 1e-12);
}

#[test]
fn short_span_is_rejected() {
    let (tr, p) = exact(FIG2_A, ZERO, NORTH, 1.0, 100);
    assert!(matches!(classify_trajectory(&tr, &p), Err(Error::InsufficientSpan { .. })));
}

#[test]
fn entropy_anchor_values() {
    let (tr, p) = exact(FIG5_A, FIG5_B, ZERO, 80.0, 8001);
    let s = entropy_series(&tr);
    assert_eq!(s[0], 1.0);
    let amp = tail_amplitude(&s, TAIL_FRACTION);
    assert!(amp > 1e-2, "{amp}");
    // sustained: the last eighth oscillates as much as the quarter before it
    let n = s.len();
    let late = tail_amplitude(&s[n / 2..], TAIL_FRACTION);
    assert!((late - amp).abs() < 1e-6 * amp.max(1.0), "{late} {amp}");
    assert!(s.iter().all(|x| (0.0..=1.0).contains(x)));
    let _ = p;
}

#[test]
fn linear_boundary_entropy_is_zero() {
    let (tr, _) = exact(FIG1_A, ZERO, NORTH, 50.0, 501);
    let s = entropy_series(&tr);
    assert!(s.iter().all(|x| x.abs() < 1e-8), "{:?}", &s[..5]);
}

#[test]
fn generator_frequencies() {
    let fig5 = EvolutionParams::new(v(FIG5_A), v(FIG5_B)).unwrap();
    assert_eq!(asymptotic_frequencies(&fig5).len(), 1);
    let fig2 = EvolutionParams::linear(v(FIG2_A)).unwrap();
    let w = asymptotic_frequencies(&fig2);
    assert!((w[0] - 6f64.sqrt()).abs() < 1e-12 && (w[1] - 2.0 * 6f64.sqrt()).abs() < 1e-12, "{w:?}");
    let conv = EvolutionParams::new(Vec8::ZERO, v(FIG5_B)).unwrap();
    assert!(asymptotic_frequencies(&conv).is_empty());
    assert_eq!(independent_frequency_count(&[]), 0);
    assert_eq!(independent_frequency_count(&[1.0, 1.5, 2.5]), 1);
    assert_eq!(independent_frequency_count(&[1.0, SQRT3]), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn linear_entropy_is_constant(seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let p = EvolutionParams::linear(crate::random::vec8(&mut rng, 1.0)).unwrap();
        let xi0 = crate::random::state(&mut rng);
        let tr = integrate(&xi0, &p, 20.0, &IntegrateOptions { samples: 201, ..Default::default() }).unwrap();
        let s0 = entropy(&xi0).unwrap();
        for s in entropy_series(&tr) {
            prop_assert!((s - s0).abs() < 1e-8, "{s} {s0}");
        }
    }

    #[test]
    fn crossing_residuals_are_small(seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let p = EvolutionParams::new(crate::random::vec8(&mut rng, 1.0), crate::random::vec8(&mut rng, 0.3)).unwrap();
        let xi0 = crate::random::state(&mut rng);
        let tr = evolve_pointwise(&xi0, &p, &uniform_grid(20.0, 801), Engine::Exact).unwrap();
        let s = SectionSpec::new(crate::random::unit_vec8(&mut rng), tr.states[400], CrossingSense::Both).unwrap();
        for c in poincare(&tr, &p, &s).unwrap() {
            prop_assert!(c.residual < CROSSING_TOL, "{}", c.residual);
        }
    }
}

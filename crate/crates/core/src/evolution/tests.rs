use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::sampling::random_params;
use super::*;
use crate::random;
use crate::state_space::purity_residual;

fn v(x: [f64; 8]) -> Vec8 {
    Vec8::new(x)
}

const H: f64 = SQRT3 / 2.0;

#[test]
fn detect_case_examples() {
    let e8 = Vec8::e(8);
    assert_eq!(detect_case(&-e8, &Vec8::ZERO), CaseTag::LinearStarPos);
    assert_eq!(detect_case(&e8, &Vec8::ZERO), CaseTag::LinearStarNeg);
    let b = v([0.0, 0.0, H, 0.0, 0.0, 0.0, 0.0, -0.5]);
    assert_eq!(detect_case(&Vec8::ZERO, &b), CaseTag::NonlinStarNeg);
    assert_eq!(detect_case(&Vec8::e(3), &Vec8::ZERO), CaseTag::LinearNullCubic);
    assert_eq!(detect_case(&Vec8::ZERO, &Vec8::ZERO), CaseTag::LinearDiagonal);
    let d = v([0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.5]);
    assert_eq!(detect_case(&d, &Vec8::ZERO), CaseTag::LinearDiagonal);
    assert_eq!(detect_case(&Vec8::ZERO, &d), CaseTag::NonlinDiagonal);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let (a, b) = (random::vec8(&mut rng, 1.0), random::vec8(&mut rng, 1.0));
        assert_eq!(detect_case(&a, &b), CaseTag::General);
    }
}

#[test]
fn samplers_hit_their_case() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for tag in CaseTag::SPECIAL {
        for _ in 0..10 {
            assert_eq!(random_params(tag, &mut rng).case_tag(), tag);
        }
    }
}

#[test]
fn params_reject_non_finite() {
    let mut a = Vec8::ZERO;
    a[3] = f64::NAN;
    assert!(matches!(EvolutionParams::linear(a), Err(Error::NonFinite(_))));
}

#[test]
fn rhs_zero_generators() {
    let p = EvolutionParams::new(Vec8::ZERO, Vec8::ZERO).unwrap();
    let xi = v([0.1, -0.2, 0.3, 0.0, 0.1, 0.0, -0.1, 0.2]);
    assert_eq!(riccati_rhs(&xi, &p), Vec8::ZERO);
}

#[test]
fn rhs_vanishes_at_star_equilibrium() {
    let b = v([0.0, 0.0, H, 0.0, 0.0, 0.0, 0.0, 0.5]) * 1.7;
    let p = EvolutionParams::new(Vec8::ZERO, b).unwrap();
    assert_eq!(p.case_tag(), CaseTag::NonlinStarPos);
    assert!(riccati_rhs(&(b / b.norm()), &p).norm() < 1e-14);
}

#[test]
fn linear_rhs_preserves_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let p = EvolutionParams::linear(random::vec8(&mut rng, 2.0)).unwrap();
        let xi = random::state(&mut rng);
        let r = riccati_rhs(&xi, &p);
        assert!(xi.dot(&r).abs() < 1e-13);
        assert!(xi.star(&xi).dot(&r).abs() < 1e-13);
    }
}

#[test]
fn qubit_rhs_examples() {
    let z = [0.3, -0.4, 0.5];
    assert_eq!(qubit_rhs(&z, &[0.0; 3], &[0.0; 3]), [0.0; 3]);
    let b = [0.6, 0.0, 0.8];
    let r = qubit_rhs(&b, &[0.0; 3], &b);
    assert!(r.iter().all(|x| x.abs() < 1e-15));
}

#[test]
fn qubit_embedding_matches_rhs() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..50 {
        let mut three = || -> [f64; 3] { std::array::from_fn(|_| rand::Rng::random_range(&mut rng, -1.0..=1.0)) };
        let (a3, b3, mut z) = (three(), three(), three());
        let n = (z[0] * z[0] + z[1] * z[1] + z[2] * z[2]).sqrt();
        if n > 1.0 {
            z = z.map(|x| x / n);
        }
        let xi = embed_qubit_state(&z);
        assert!(classify(&xi).is_valid());
        let p = EvolutionParams::new(embed_qubit_generator(&a3), embed_qubit_generator(&b3)).unwrap();
        let r = riccati_rhs(&xi, &p);
        let q = qubit_rhs(&z, &a3, &b3);
        for i in 0..3 {
            assert!((r[i] - H * q[i]).abs() < 1e-13);
        }
        for i in 3..8 {
            assert!(r[i].abs() < 1e-13, "component {} = {}", i + 1, r[i]);
        }
        assert_eq!(project_qubit_state(&xi).map(|x| (x * 1e12).round()), z.map(|x| (x * 1e12).round()));
    }
}

#[test]
fn literal_zero_padded_embedding_is_linear_only() {
    // ξ₈ = 0 is invariant for b = 0 only
    let z = [0.1, 0.2, 0.3];
    let lit = v([z[0], z[1], z[2], 0.0, 0.0, 0.0, 0.0, 0.0]);
    let a = embed_qubit_generator(&[0.4, -0.3, 0.9]);
    let lin = EvolutionParams::linear(a).unwrap();
    let r = riccati_rhs(&lit, &lin);
    assert!((3..8).all(|i| r[i].abs() < 1e-14));
    let non = EvolutionParams::new(a, embed_qubit_generator(&[0.2, 0.1, 0.5])).unwrap();
    let r = riccati_rhs(&lit, &non);
    assert!(r[7].abs() > 1e-3);
}

#[test]
fn qubit_flow_embeds() {
    let (a3, b3, z0) = ([0.3, -0.7, 0.2], [0.1, 0.4, -0.3], [0.2, 0.5, -0.6]);
    let grid = uniform_grid(5.0, 51);
    let zs = integrate_qubit(&z0, &a3, &b3, &grid, &OdeOptions::default()).unwrap();
    let p = EvolutionParams::new(embed_qubit_generator(&a3), embed_qubit_generator(&b3)).unwrap();
    let tr = integrate_on(&embed_qubit_state(&z0), &p, &grid, &OdeOptions::default()).unwrap();
    for (z, xi) in zs.iter().zip(&tr.states) {
        assert!(embed_qubit_state(z).dist(xi) < 1e-9);
    }
}

#[test]
fn closed_forms_are_identity_at_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for tag in CaseTag::SPECIAL {
        let p = random_params(tag, &mut rng);
        let xi0 = random::state(&mut rng);
        assert!(closed_form(&xi0, &p, 0.0).unwrap().dist(&xi0) < 1e-14, "{tag:?}");
        let lp = linearization(&xi0, &p, 0.0).unwrap();
        assert!((lp.phi - 1.0).abs() < 1e-14);
    }
}

#[test]
fn no_case_is_oracle_backed() {
    assert_eq!(oracle_backed_cases(), vec![]);
}

#[test]
fn closed_forms_match_propagator() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for tag in CaseTag::SPECIAL {
        for _ in 0..5 {
            let p = random_params(tag, &mut rng);
            let xi0 = random::state(&mut rng);
            for t in [0.1, 0.7, 2.3, 9.0] {
                let c = closed_form_unguarded(&xi0, &p, t).unwrap();
                let e = propagate_exact(&xi0, &p, t).unwrap();
                assert!(c.dist(&e) < 1e-9, "{tag:?} t={t}: {:e}", c.dist(&e));
                assert!(classify(&c).is_valid());
            }
        }
    }
}

#[test]
fn general_case_has_no_closed_form() {
    let p = EvolutionParams::new(Vec8::e(1) + Vec8::e(4) * 0.3, Vec8::e(6) * 0.2).unwrap();
    assert_eq!(p.case_tag(), CaseTag::General);
    assert!(matches!(closed_form(&Vec8::ZERO, &p, 1.0), Err(Error::UnsupportedCase)));
}

#[test]
fn linear_star_is_periodic() {
    let a = v([0.0, 0.0, H, 0.0, 0.0, 0.0, 0.0, 0.5]) * 1.3;
    let p = EvolutionParams::linear(a).unwrap();
    assert_eq!(p.case_tag(), CaseTag::LinearStarPos);
    let period = 2.0 * std::f64::consts::PI / (SQRT3 * a.norm());
    let xi0 = v([0.2, 0.1, 0.0, -0.3, 0.1, 0.2, 0.0, 0.1]);
    for k in 1..4 {
        let x = closed_form(&xi0, &p, k as f64 * period).unwrap();
        assert!(x.dist(&xi0) < 1e-12);
    }
    assert!(closed_form(&xi0, &p, 0.5 * period).unwrap().dist(&xi0) > 1e-3);
}

#[test]
fn nonlinear_star_from_center_tends_to_b_direction() {
    let b = -Vec8::e(8) * 0.8;
    let p = EvolutionParams::new(Vec8::ZERO, b).unwrap();
    assert_eq!(p.case_tag(), CaseTag::NonlinStarPos);
    let x = closed_form(&Vec8::ZERO, &p, 40.0).unwrap();
    assert!(x.dist(&(b / b.norm())) < 1e-10);
    // beyond the exponential range the propagator takes over
    let x = closed_form(&Vec8::ZERO, &p, 2000.0).unwrap();
    assert!(x.dist(&(b / b.norm())) < 1e-10);
}

#[test]
fn rational_limit_is_pure() {
    // N = (a + ib)·λ has N² = 0, hence rank one, so N ρ N† is a pure state
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..5 {
        let p = random_params(CaseTag::Rational, &mut rng);
        let lim = rational_limit(&p).unwrap();
        assert!((lim.norm_sq() - 1.0).abs() < 1e-9);
        assert!((crate::state_space::r_det(&lim) - 1.0).abs() < 1e-9);
        assert_eq!(classify(&lim).tag, StateTag::PureBoundary);
        let far = closed_form(&Vec8::ZERO, &p, 1e5).unwrap();
        assert!(far.dist(&lim) < 1e-4);
        assert!(riccati_rhs(&lim, &p).norm() < 1e-9);
    }
}

#[test]
fn linearization_reproduces_rhs() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for tag in CaseTag::SPECIAL {
        let p = random_params(tag, &mut rng);
        let xi0 = random::state(&mut rng);
        for t in [0.2, 1.1] {
            let h = 1e-5;
            let x = |s| closed_form(&xi0, &p, s).unwrap();
            let fd = (x(t + h) - x(t - h)) / (2.0 * h);
            let r = riccati_rhs(&x(t), &p);
            assert!(fd.dist(&r) < 1e-6, "{tag:?}: {:e}", fd.dist(&r));
            assert!(linearization(&xi0, &p, t).unwrap().phi > 0.0);
        }
    }
}

#[test]
fn propagator_preserves_purity() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..20 {
        let p = EvolutionParams::new(random::vec8(&mut rng, 2.0), random::vec8(&mut rng, 2.0)).unwrap();
        let xi0 = random::pure_state(&mut rng);
        assert!(propagate_exact(&xi0, &p, 0.0).unwrap().dist(&xi0) < 1e-14);
        for t in [0.5, 3.0, 50.0] {
            let x = propagate_exact(&xi0, &p, t).unwrap();
            assert!(purity_residual(&x) < 1e-9, "{:e}", purity_residual(&x));
        }
    }
}

#[test]
fn propagator_rejects_invalid_state() {
    let p = EvolutionParams::linear(Vec8::e(1)).unwrap();
    assert!(matches!(propagate_exact(&(Vec8::e(3) * 2.0), &p, 1.0), Err(Error::InvalidState)));
}

#[test]
fn integrate_matches_propagator() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..5 {
        let p = EvolutionParams::new(random::vec8(&mut rng, 0.7), random::vec8(&mut rng, 0.7)).unwrap();
        let xi0 = random::state(&mut rng);
        let tr = integrate(&xi0, &p, 10.0, &IntegrateOptions { samples: 11, ..Default::default() }).unwrap();
        assert!(tr.all_valid());
        let e = propagate_exact(&xi0, &p, 10.0).unwrap();
        assert!(tr.last().unwrap().dist(&e) < 1e-7, "{:e}", tr.last().unwrap().dist(&e));
    }
}

#[test]
fn linear_integration_conserves_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let p = EvolutionParams::linear(random::vec8(&mut rng, 1.0)).unwrap();
    let xi0 = random::state(&mut rng);
    let tr = integrate(&xi0, &p, 100.0, &IntegrateOptions { samples: 201, ..Default::default() }).unwrap();
    let (n0, c0) = (xi0.norm_sq(), xi0.dot(&xi0.star(&xi0)));
    for x in &tr.states {
        assert!((x.norm_sq() - n0).abs() < 1e-8);
        assert!((x.dot(&x.star(x)) - c0).abs() < 1e-8);
    }
}

#[test]
fn integrate_rejects_bad_input() {
    let p = EvolutionParams::linear(Vec8::e(1)).unwrap();
    assert!(matches!(
        integrate(&Vec8::ZERO, &p, -1.0, &IntegrateOptions::default()),
        Err(Error::DomainError(_))
    ));
    assert!(matches!(
        integrate(&(Vec8::e(1) * 1.5), &p, 1.0, &IntegrateOptions::default()),
        Err(Error::InvalidState)
    ));
}

#[test]
fn pointwise_engines_fill_meta() {
    let p = EvolutionParams::linear(Vec8::e(3)).unwrap();
    let grid = uniform_grid(2.0, 5);
    let tr = evolve_pointwise(&(Vec8::e(1) * 0.5), &p, &grid, Engine::ClosedForm).unwrap().with_entropy();
    assert_eq!(tr.meta.engine, Engine::ClosedForm);
    assert_eq!(tr.len(), 5);
    assert!(tr.entropy.unwrap().iter().all(|s| s.is_finite()));
}

#[test]
fn convexity_trivial_cases() {
    let p = EvolutionParams::new(Vec8::e(2), Vec8::e(4) * 0.5).unwrap();
    let (x1, x2) = (Vec8::e(3) * 0.5, Vec8::e(8) * -0.5);
    assert_eq!(convexity_lambda(&x1, &x2, 1.0, &p, 1.0).unwrap().lambda_prime, 1.0);
    let c = convexity_lambda(&x1, &x1, 0.3, &p, 1.0).unwrap();
    assert!((c.lambda_prime - 0.3).abs() < 1e-14);
    assert!(matches!(convexity_lambda(&x1, &x2, 1.5, &p, 1.0), Err(Error::DomainError(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn convexity_map_identity(seed in any::<u64>(), lambda in 0.0..=1.0f64, t in 0.0..3.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = EvolutionParams::new(random::vec8(&mut rng, 1.5), random::vec8(&mut rng, 1.5)).unwrap();
        let (x1, x2) = (random::state(&mut rng), random::state(&mut rng));
        let c = convexity_lambda(&x1, &x2, lambda, &p, t).unwrap();
        prop_assert!((0.0..=1.0).contains(&c.lambda_prime));
        prop_assert!(c.map_residual < 1e-10, "{:e}", c.map_residual);
    }

    #[test]
    fn propagator_stays_in_state_space(seed in any::<u64>(), t in 0.0..30.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = EvolutionParams::new(random::vec8(&mut rng, 2.0), random::vec8(&mut rng, 2.0)).unwrap();
        let x = propagate_exact(&random::state(&mut rng), &p, t).unwrap();
        prop_assert!(classify(&x).is_valid());
    }
}

//! Randomized verification of the su(3) product identities, matrix relations
//! and trace invariants.

use std::fmt;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::random;
use crate::su3::structure::{gell_mann, lambda_dot, StructureConstants, SQRT3};
use crate::su3::{cubic_invariant, exp_lambda, matrix_exp, power_coefficients, CMat3, Vec8};

pub const IDENTITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub max_residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub seed: u64,
    pub count: usize,
    pub tolerance: f64,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn worst(&self) -> f64 {
        self.checks.iter().fold(0.0, |m, c| m.max(c.max_residual))
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "identity suite: seed={} count={} tol={:e}",
            self.seed, self.count, self.tolerance
        )?;
        for c in &self.checks {
            writeln!(
                f,
                "{:<4} {:<34} {:.3e}",
                if c.passed { "ok" } else { "FAIL" },
                c.name,
                c.max_residual
            )?;
        }
        write!(
            f,
            "{}",
            if self.all_passed() { "all passed" } else { "FAILURES" }
        )
    }
}

type VecCheck = fn(&Vec8, &Vec8, &Vec8) -> f64;
type MatCheck = fn(&Vec8, &Vec8, &Vec8) -> f64;

fn vdiff(x: Vec8, y: Vec8) -> f64 {
    (x - y).max_abs()
}

fn mdiff(x: CMat3, y: CMat3) -> f64 {
    x.max_diff(&y)
}

fn scalar(s: f64) -> CMat3 {
    CMat3::IDENTITY.scale_re(s)
}

fn cl(v: &Vec8) -> CMat3 {
    lambda_dot(v)
}

/// `(x + i y)·λ`.
fn cl2(x: &Vec8, y: &Vec8) -> CMat3 {
    lambda_dot(x) + lambda_dot(y).scale(Complex64::new(0.0, 1.0))
}

const VECTOR_CHECKS: &[(&str, VecCheck)] = &[
    ("jacobi_wedge", |a, b, c| {
        (a.wedge(&b.wedge(c)) + b.wedge(&c.wedge(a)) + c.wedge(&a.wedge(b))).max_abs()
    }),
    ("wedge_wedge_expansion", |a, b, c| {
        let rhs = (*b * a.dot(c) - *c * a.dot(b)) * 2.0 + b.star(&a.star(c)) - c.star(&a.star(b));
        vdiff(a.wedge(&b.wedge(c)), rhs)
    }),
    ("wedge_norm", |a, b, _| {
        let w = a.wedge(b).norm_sq();
        // with the √3-scaled products; the unscaled tensor form carries 2/3 and 1/3
        let rhs = 2.0 * (a.norm_sq() * b.norm_sq() - a.dot(b).powi(2))
            + a.star(a).dot(&b.star(b))
            - a.star(b).norm_sq();
        (w - rhs).abs()
    }),
    ("wedge_star_cyclic", |a, b, c| {
        (a.wedge(&b.star(c)) + b.wedge(&c.star(a)) + c.wedge(&a.star(b))).max_abs()
    }),
    ("wedge_star_mixed", |a, b, c| {
        (a.wedge(&b.star(c)) + c.star(&b.wedge(a)) + b.star(&c.wedge(a))).max_abs()
    }),
    ("wedge_of_square_vanishes", |a, _, _| a.wedge(&a.star(a)).max_abs()),
    ("wedge_commutes_with_ansatz", |a, b, _| {
        let mu = b[0];
        let nu = b[1];
        a.wedge(&(*a * mu + a.star(a) * nu)).max_abs()
    }),
    ("wedge_star_symmetric_pair", |a, b, c| {
        let lhs = b.wedge(&a.star(c)) + c.wedge(&a.star(b));
        let rhs = c.star(&b.wedge(a)) + b.star(&c.wedge(a));
        vdiff(lhs, rhs)
    }),
    ("star_cyclic", |a, b, c| {
        let lhs = a.star(&b.star(c)) + b.star(&c.star(a)) + c.star(&a.star(b));
        let rhs = *a * b.dot(c) + *b * c.dot(a) + *c * a.dot(b);
        vdiff(lhs, rhs)
    }),
    ("star_cube", |a, _, _| vdiff(a.star(&a.star(a)), *a * a.norm_sq())),
    ("star_square_squared", |a, _, _| {
        let aa = a.star(a);
        vdiff(aa.star(&aa), *a * (2.0 * a.dot(&aa)) - aa * a.norm_sq())
    }),
    ("triple_wedge_symmetry", |a, b, c| {
        let x = a.dot(&b.wedge(c));
        let y = b.dot(&c.wedge(a));
        let z = c.dot(&a.wedge(b));
        (x - y).abs().max((y - z).abs())
    }),
    ("triple_star_symmetry", |a, b, c| {
        let x = a.dot(&b.star(c));
        let y = b.dot(&c.star(a));
        let z = c.dot(&a.star(b));
        (x - y).abs().max((y - z).abs())
    }),
    ("star_square_norm", |a, _, _| (a.star(a).norm_sq() - a.norm_sq().powi(2)).abs()),
    ("cubic_invariant_coordinates", |a, _, _| {
        (cubic_invariant(a) - a.dot(&a.star(a))).abs()
    }),
];

const MATRIX_CHECKS: &[(&str, MatCheck)] = &[
    ("matrix_product", |a, b, _| {
        let rhs = scalar(2.0 / 3.0 * a.dot(b)) + cl2(&(a.star(b) / SQRT3), &(a.wedge(b) / SQRT3));
        mdiff(cl(a) * cl(b), rhs)
    }),
    ("matrix_square", |a, _, _| {
        mdiff(cl(a) * cl(a), scalar(2.0 / 3.0 * a.norm_sq()) + cl(&(a.star(a) / SQRT3)))
    }),
    ("commutator", |a, b, _| {
        let rhs = lambda_dot(&a.wedge(b)).scale(Complex64::new(0.0, 2.0 / SQRT3));
        mdiff(cl(a).commutator(&cl(b)), rhs)
    }),
    ("anticommutator", |a, b, _| {
        let rhs = scalar(4.0 / 3.0 * a.dot(b)) + cl(&(a.star(b) * (2.0 / SQRT3)));
        mdiff(cl(a).anticommutator(&cl(b)), rhs)
    }),
    ("triple_product", |a, b, c| {
        let s = CMat3::IDENTITY.scale(
            Complex64::new(c.dot(&a.star(b)), c.dot(&a.wedge(b))) * (2.0 / (3.0 * SQRT3)),
        );
        let re = (b.star(&a.star(c)) - c.star(&a.star(b)) - a.star(&b.star(c))) * (-1.0 / 3.0)
            + (*b * a.dot(c) - *c * a.dot(b) - *a * b.dot(c)) * (-2.0 / 3.0);
        let im = (c.star(&a.wedge(b)) - c.wedge(&a.star(b))) / 3.0;
        mdiff(cl(a) * cl(b) * cl(c), s + cl2(&re, &im))
    }),
    ("sandwich_product", |a, b, _| {
        let s = scalar(2.0 / (3.0 * SQRT3) * a.dot(&a.star(b)));
        let v = b.star(&a.star(a)) * (-2.0 / 3.0) - *b * (a.norm_sq() / 3.0) + *a * (2.0 * a.dot(b));
        mdiff(cl(a) * cl(b) * cl(a), s + cl(&v))
    }),
    ("matrix_cube", |a, _, _| {
        let s = scalar(2.0 / (3.0 * SQRT3) * cubic_invariant(a));
        mdiff(cl(a) * cl(a) * cl(a), s + cl(&(*a * a.norm_sq())))
    }),
    ("quadratic_casimir", |a, _, _| {
        let m = cl(a);
        ((m * m).trace() * 0.5 - Complex64::from(a.norm_sq())).norm()
    }),
    ("cubic_casimir", |a, _, _| {
        let m = cl(a);
        ((m * m * m).trace() * (SQRT3 / 2.0) - Complex64::from(cubic_invariant(a))).norm()
    }),
    ("determinant", |a, _, _| {
        (cl(a).det() - Complex64::from(2.0 / (3.0 * SQRT3) * cubic_invariant(a))).norm()
    }),
    ("power_recurrence", |a, _, _| {
        let co = power_coefficients(a, 12);
        let (m, mm) = (cl(a), cl(&a.star(a)));
        let mut p = CMat3::IDENTITY;
        let mut worst: f64 = 0.0;
        for c in co {
            let rhs = scalar(c[0]) + m.scale_re(c[1]) + mm.scale_re(c[2]);
            worst = worst.max(mdiff(p, rhs) / p.max_abs().max(1.0));
            p = p * m;
        }
        worst
    }),
    ("exp_lambda_vs_series", |a, b, _| {
        let tau = Complex64::new(b[0], b[1]);
        let e = exp_lambda(tau, a).expect("finite");
        let s = matrix_exp(&cl(a).scale(tau)).expect("bounded");
        mdiff(e, s) / s.max_abs().max(1.0)
    }),
    ("exp_lambda_group", |a, b, _| {
        let (t1, t2) = (Complex64::new(b[0], b[1]), Complex64::new(b[2], b[3]));
        let l = exp_lambda(t1 + t2, a).expect("finite");
        let r = exp_lambda(t1, a).expect("finite") * exp_lambda(t2, a).expect("finite");
        mdiff(l, r) / l.max_abs().max(1.0)
    }),
];

/// Table-level identities on the structure constants; independent of draws.
fn tensor_checks() -> Vec<(&'static str, f64)> {
    let sc = StructureConstants::get();
    let (f, d) = (&sc.f, &sc.d);
    let delta = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
    let mut ff: f64 = 0.0;
    let mut fd1: f64 = 0.0;
    let mut fd2: f64 = 0.0;
    let mut dd: f64 = 0.0;
    let mut orth: f64 = 0.0;
    for i in 0..8 {
        for j in 0..8 {
            let t = (gell_mann()[i] * gell_mann()[j]).trace();
            orth = orth.max((t - Complex64::from(2.0 * delta(i, j))).norm());
            for l in 0..8 {
                for m in 0..8 {
                    let (mut s_ff, mut s_fd1, mut s_fd2, mut s_dd) = (0.0, 0.0, 0.0, 0.0);
                    let mut s_d = 0.0;
                    for k in 0..8 {
                        s_ff += f[i][j][k] * f[k][l][m];
                        s_d += d[i][l][k] * d[j][m][k] - d[j][l][k] * d[i][m][k];
                        s_fd1 += f[i][j][k] * d[k][l][m] + f[i][l][k] * d[j][m][k]
                            + f[i][m][k] * d[j][l][k];
                        s_fd2 += f[i][j][k] * d[k][l][m] + f[l][j][k] * d[i][m][k]
                            + f[m][j][k] * d[i][l][k];
                        s_dd += d[i][j][k] * d[k][l][m] + d[i][l][k] * d[k][j][m]
                            + d[i][m][k] * d[k][j][l];
                    }
                    let ff_rhs = 2.0 / 3.0 * (delta(i, l) * delta(j, m) - delta(i, m) * delta(j, l)) + s_d;
                    let dd_rhs = (delta(i, j) * delta(l, m)
                        + delta(i, l) * delta(j, m)
                        + delta(i, m) * delta(j, l))
                        / 3.0;
                    ff = ff.max((s_ff - ff_rhs).abs());
                    fd1 = fd1.max(s_fd1.abs());
                    fd2 = fd2.max(s_fd2.abs());
                    dd = dd.max((s_dd - dd_rhs).abs());
                }
            }
        }
    }
    vec![
        ("tensor_ff_contraction", ff),
        ("tensor_fd_cyclic", fd1),
        ("tensor_fd_mixed", fd2),
        ("tensor_dd_contraction", dd),
        ("trace_orthogonality", orth),
    ]
}

/// Runs every identity on `count` seeded draws of `(a, b, c)` with components
/// in `[-1, 1]`. The report is a pure function of `(seed, count)`.
pub fn verify_identities(seed: u64, count: usize) -> Result<IdentityReport> {
    if count == 0 {
        return Err(Error::DomainError("count must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vmax = vec![0.0_f64; VECTOR_CHECKS.len()];
    let mut mmax = vec![0.0_f64; MATRIX_CHECKS.len()];
    for _ in 0..count {
        let a = random::vec8(&mut rng, 1.0);
        let b = random::vec8(&mut rng, 1.0);
        let c = random::vec8(&mut rng, 1.0);
        for (k, (_, check)) in VECTOR_CHECKS.iter().enumerate() {
            vmax[k] = vmax[k].max(check(&a, &b, &c));
        }
        for (k, (_, check)) in MATRIX_CHECKS.iter().enumerate() {
            mmax[k] = mmax[k].max(check(&a, &b, &c));
        }
    }
    let mut checks = Vec::new();
    let push = |checks: &mut Vec<IdentityCheck>, name: &str, r: f64| {
        checks.push(IdentityCheck {
            name: name.to_string(),
            max_residual: r,
            passed: r < IDENTITY_TOL,
        })
    };
    for ((name, _), r) in VECTOR_CHECKS.iter().zip(vmax) {
        push(&mut checks, name, r);
    }
    for ((name, _), r) in MATRIX_CHECKS.iter().zip(mmax) {
        push(&mut checks, name, r);
    }
    for (name, r) in tensor_checks() {
        push(&mut checks, name, r);
    }
    Ok(IdentityReport {
        seed,
        count,
        tolerance: IDENTITY_TOL,
        checks,
    })
}

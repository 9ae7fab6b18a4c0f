//! Characteristic cubic of `a·λ` and the power expansion
//! `(a·λ)^n = c_n + d_n a·λ + e_n (a∗a)·λ`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::structure::{cubic_invariant, SQRT3};
use super::vec8::Vec8;
use crate::error::{Error, Result};

/// Roots of `x³ − a² x − (2/(3√3)) a·(a∗a) = 0`, which are the eigenvalues
/// of `a·λ`. Sorted descending.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicRoots {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    /// Angle with `cos α = a·(a∗a) / |a|³`, in `[0, π]`.
    pub alpha: f64,
    /// Discriminant `Q = ([a·(a∗a)]² − |a|⁶) / 27`, never positive.
    pub discriminant_q: f64,
}

impl CubicRoots {
    pub fn as_array(&self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }
}

/// `cos α = a·(a∗a) / |a|³` clamped into `[−1, 1]`; zero for `a = 0`.
pub fn cos_alpha(a: &Vec8) -> f64 {
    let n = a.norm();
    if n == 0.0 {
        return 0.0;
    }
    (cubic_invariant(a) / (n * n * n)).clamp(-1.0, 1.0)
}

/// Trigonometric solution of the characteristic cubic.
///
/// `a = 0` yields the triple root zero (with `α = 0`) rather than an error;
/// only non-finite input is rejected.
pub fn cubic_roots(a: &Vec8) -> Result<CubicRoots> {
    if !a.is_finite() {
        return Err(Error::NonFinite("cubic_roots argument"));
    }
    let n = a.norm();
    let k = cubic_invariant(a);
    let q = (k * k - n.powi(6)) / 27.0;
    if n == 0.0 {
        return Ok(CubicRoots {
            x1: 0.0,
            x2: 0.0,
            x3: 0.0,
            alpha: 0.0,
            discriminant_q: 0.0,
        });
    }
    let alpha = cos_alpha(a).acos();
    let r = 2.0 / SQRT3 * n;
    let t = alpha / 3.0;
    Ok(CubicRoots {
        x1: r * t.cos(),
        x2: -r * (t + PI / 3.0).cos(),
        x3: -r * (t - PI / 3.0).cos(),
        alpha,
        discriminant_q: q.min(0.0),
    })
}

/// Power-expansion coefficients `(c_n, d_n, e_n)` for `n = 0..=n_max`, from the
/// three-term recurrence.
pub fn power_coefficients(a: &Vec8, n_max: usize) -> Vec<[f64; 3]> {
    let a2 = a.norm_sq();
    let k = cubic_invariant(a);
    let mut out = Vec::with_capacity(n_max + 1);
    let (mut c, mut d, mut e) = (1.0, 0.0, 0.0);
    out.push([c, d, e]);
    for _ in 0..n_max {
        let c1 = 2.0 / 3.0 * a2 * d + 2.0 / 3.0 * k * e;
        let d1 = a2 * e / SQRT3 + c;
        let e1 = d / SQRT3;
        c = c1;
        d = d1;
        e = e1;
        out.push([c, d, e]);
    }
    out
}

/// Closed trigonometric form of the power-expansion coefficients. Valid for
/// `Q < 0`; returns `None` when `sin(α/3)` or the cosine denominators vanish.
pub fn power_coefficients_closed(a: &Vec8, n: u32) -> Option<[f64; 3]> {
    let w = TrigWeights::new(a)?;
    let p = |x: f64| x.powi(n as i32);
    let [r1, r2, r3] = w.roots;
    Some([
        w.c[0] * p(r1) + w.c[1] * p(r2) + w.c[2] * p(r3),
        w.d[0] * p(r1) + w.d[1] * p(r2) + w.d[2] * p(r3),
        w.e[0] * p(r1) + w.e[1] * p(r2) + w.e[2] * p(r3),
    ])
}

/// Weights of the three spectral terms in the trigonometric closed forms.
pub(crate) struct TrigWeights {
    pub roots: [f64; 3],
    pub c: [f64; 3],
    pub d: [f64; 3],
    pub e: [f64; 3],
    /// Smallest of `|sin(α/3)|`, `|cos(α/3 ± π/6)|`.
    pub conditioning: f64,
}

impl TrigWeights {
    pub fn new(a: &Vec8) -> Option<Self> {
        let n = a.norm();
        if n == 0.0 {
            return None;
        }
        let a2 = n * n;
        let t = cos_alpha(a).acos() / 3.0;
        let cp = (t + PI / 6.0).cos();
        let cm = (t - PI / 6.0).cos();
        let s = t.sin();
        let conditioning = s.abs().min(cp.abs()).min(cm.abs());
        if conditioning == 0.0 {
            return None;
        }
        let r = 2.0 / SQRT3 * n;
        let roots = [
            r * t.cos(),
            -r * (t + PI / 3.0).cos(),
            -r * (t - PI / 3.0).cos(),
        ];
        let sm = (t - PI / 6.0).sin();
        let sp = (t + PI / 6.0).sin();
        let c = [
            (4.0 * t.cos().powi(2) - 1.0) / (12.0 * cp * cm),
            (-4.0 * sm * sm + 1.0) / (12.0 * cp * s),
            (4.0 * sp * sp - 1.0) / (12.0 * cm * s),
        ];
        let d = [
            t.cos() / (2.0 * SQRT3 * n * cp * cm),
            -sm / (2.0 * SQRT3 * n * cp * s),
            -sp / (2.0 * SQRT3 * n * cm * s),
        ];
        let e = [
            1.0 / (4.0 * SQRT3 * a2 * cp * cm),
            -1.0 / (4.0 * SQRT3 * a2 * cp * s),
            1.0 / (4.0 * SQRT3 * a2 * cm * s),
        ];
        Some(TrigWeights {
            roots,
            c,
            d,
            e,
            conditioning,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(a: &Vec8, x: f64) -> f64 {
        x.powi(3) - a.norm_sq() * x - 2.0 / (3.0 * SQRT3) * cubic_invariant(a)
    }

    #[test]
    fn star_positive_vector_has_double_root() {
        let a = -Vec8::e(8);
        let r = cubic_roots(&a).unwrap();
        assert!((r.x1 - 2.0 / SQRT3).abs() < 1e-14);
        assert!((r.x2 + 1.0 / SQRT3).abs() < 1e-7);
        assert!((r.x3 + 1.0 / SQRT3).abs() < 1e-7);
        assert!(r.alpha.abs() < 1e-7);
        assert!(r.discriminant_q.abs() < 1e-14);
    }

    #[test]
    fn lambda3_roots_are_its_eigenvalues() {
        let r = cubic_roots(&Vec8::e(3)).unwrap();
        assert!((r.x1 - 1.0).abs() < 1e-14);
        assert!(r.x2.abs() < 1e-14);
        assert!((r.x3 + 1.0).abs() < 1e-14);
        assert!((r.alpha - PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn zero_vector_gives_triple_zero() {
        let r = cubic_roots(&Vec8::ZERO).unwrap();
        assert_eq!(r.as_array(), [0.0; 3]);
    }

    #[test]
    fn non_finite_rejected() {
        let mut a = Vec8::e(1);
        a[4] = f64::NAN;
        assert!(matches!(cubic_roots(&a), Err(Error::NonFinite(_))));
    }

    #[test]
    fn roots_sum_to_zero_and_solve_the_cubic() {
        let a = Vec8::new([0.3, -0.7, 0.2, 1.1, -0.4, 0.5, 0.9, -0.6]);
        let r = cubic_roots(&a).unwrap();
        assert!((r.x1 + r.x2 + r.x3).abs() < 1e-13);
        for x in r.as_array() {
            assert!(residual(&a, x).abs() < 1e-12);
        }
        assert!(r.x1 >= r.x2 && r.x2 >= r.x3);
        assert!(r.discriminant_q < 0.0);
    }

    #[test]
    fn recurrence_starts_from_identity_and_a() {
        let a = Vec8::new([0.3, -0.7, 0.2, 1.1, -0.4, 0.5, 0.9, -0.6]);
        let co = power_coefficients(&a, 2);
        assert_eq!(co[0], [1.0, 0.0, 0.0]);
        assert_eq!(co[1], [0.0, 1.0, 0.0]);
        assert!((co[2][0] - 2.0 / 3.0 * a.norm_sq()).abs() < 1e-14);
        assert!(co[2][1].abs() < 1e-14);
        assert!((co[2][2] - 1.0 / SQRT3).abs() < 1e-14);
    }

    #[test]
    fn closed_coefficients_match_recurrence() {
        let a = Vec8::new([0.3, -0.7, 0.2, 1.1, -0.4, 0.5, 0.9, -0.6]);
        let rec = power_coefficients(&a, 12);
        for (n, r) in rec.iter().enumerate() {
            let c = power_coefficients_closed(&a, n as u32).unwrap();
            for k in 0..3 {
                assert!(
                    (c[k] - r[k]).abs() < 1e-11 * (1.0 + r[k].abs()),
                    "n={n} k={k}: {} vs {}",
                    c[k],
                    r[k]
                );
            }
        }
    }
}

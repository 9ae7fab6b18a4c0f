//! Gell-Mann matrices and the su(3) structure constants.
//!
//! Both structure-constant tables are generated from traces of the Gell-Mann
//! matrices,
//!
//! ```text
//! f_jkl = Tr([λ_j, λ_k] λ_l) / (4i),    d_jkl = Tr({λ_j, λ_k} λ_l) / 4,
//! ```
//!
//! and cross-checked against the hand-listed independent components
//! ([`listed_f`], [`listed_d`]). The wedge and star products iterate over the
//! nonzero entries only.

use std::sync::OnceLock;

use num_complex::Complex64;

use super::cmat3::{CMat3, ONE};
use super::vec8::Vec8;

pub const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Dense 8×8×8 table, 0-based indices.
pub type Table3 = [[[f64; 8]; 8]; 8];

/// The eight Gell-Mann matrices, `gell_mann()[k - 1]` is λ_k.
pub fn gell_mann() -> &'static [CMat3; 8] {
    static LAMBDA: OnceLock<[CMat3; 8]> = OnceLock::new();
    LAMBDA.get_or_init(|| {
        let i = Complex64::new(0.0, 1.0);
        let s = 1.0 / SQRT3;
        let mut l = [CMat3::ZERO; 8];
        l[0].m[0][1] = ONE;
        l[0].m[1][0] = ONE;
        l[1].m[0][1] = -i;
        l[1].m[1][0] = i;
        l[2].m[0][0] = ONE;
        l[2].m[1][1] = -ONE;
        l[3].m[0][2] = ONE;
        l[3].m[2][0] = ONE;
        l[4].m[0][2] = -i;
        l[4].m[2][0] = i;
        l[5].m[1][2] = ONE;
        l[5].m[2][1] = ONE;
        l[6].m[1][2] = -i;
        l[6].m[2][1] = i;
        l[7] = CMat3::diag([ONE * s, ONE * s, ONE * (-2.0 * s)]);
        l
    })
}

/// Both structure-constant tables.
#[derive(Debug, Clone)]
pub struct StructureConstants {
    pub f: Table3,
    pub d: Table3,
}

impl StructureConstants {
    /// Computes `f` and `d` from traces of the Gell-Mann matrices.
    pub fn from_traces() -> Self {
        let l = gell_mann();
        let mut f = [[[0.0; 8]; 8]; 8];
        let mut d = [[[0.0; 8]; 8]; 8];
        for j in 0..8 {
            for k in 0..8 {
                let comm = l[j].commutator(&l[k]);
                let anti = l[j].anticommutator(&l[k]);
                for m in 0..8 {
                    // Tr([λj,λk]λl) = 4i f_jkl
                    let tf = (comm * l[m]).trace();
                    let td = (anti * l[m]).trace();
                    f[j][k][m] = clean(tf.im / 4.0);
                    d[j][k][m] = clean(td.re / 4.0);
                }
            }
        }
        StructureConstants { f, d }
    }

    pub fn get() -> &'static StructureConstants {
        static SC: OnceLock<StructureConstants> = OnceLock::new();
        SC.get_or_init(StructureConstants::from_traces)
    }
}

fn clean(x: f64) -> f64 {
    if x.abs() < 1e-15 {
        0.0
    } else {
        x
    }
}

/// The independent nonzero `f_jkl` as printed in the su(3) literature
/// (1-based indices).
pub fn listed_f() -> Vec<([usize; 3], f64)> {
    let h = 0.5;
    let r = SQRT3 / 2.0;
    vec![
        ([1, 2, 3], 1.0),
        ([4, 5, 8], r),
        ([6, 7, 8], r),
        ([1, 4, 7], h),
        ([2, 4, 6], h),
        ([2, 5, 7], h),
        ([3, 4, 5], h),
        ([5, 1, 6], h),
        ([6, 3, 7], h),
    ]
}

/// The independent nonzero `d_jkl` (1-based indices).
pub fn listed_d() -> Vec<([usize; 3], f64)> {
    let s = 1.0 / SQRT3;
    let q = -1.0 / (2.0 * SQRT3);
    let h = 0.5;
    vec![
        ([1, 1, 8], s),
        ([2, 2, 8], s),
        ([3, 3, 8], s),
        ([8, 8, 8], -s),
        ([4, 4, 8], q),
        ([5, 5, 8], q),
        ([6, 6, 8], q),
        ([7, 7, 8], q),
        ([1, 4, 6], h),
        ([1, 5, 7], h),
        ([2, 4, 7], -h),
        ([2, 5, 6], h),
        ([3, 4, 4], h),
        ([3, 5, 5], h),
        ([3, 6, 6], -h),
        ([3, 7, 7], -h),
    ]
}

const PERMS: [([usize; 3], f64); 6] = [
    ([0, 1, 2], 1.0),
    ([1, 2, 0], 1.0),
    ([2, 0, 1], 1.0),
    ([1, 0, 2], -1.0),
    ([0, 2, 1], -1.0),
    ([2, 1, 0], -1.0),
];

/// Fully antisymmetric closure of [`listed_f`] as a dense table.
pub fn antisymmetric_closure(entries: &[([usize; 3], f64)]) -> Table3 {
    let mut t = [[[0.0; 8]; 8]; 8];
    for (idx, v) in entries {
        for (p, sign) in PERMS {
            t[idx[p[0]] - 1][idx[p[1]] - 1][idx[p[2]] - 1] = sign * v;
        }
    }
    t
}

/// Fully symmetric closure of [`listed_d`] as a dense table.
pub fn symmetric_closure(entries: &[([usize; 3], f64)]) -> Table3 {
    let mut t = [[[0.0; 8]; 8]; 8];
    for (idx, v) in entries {
        for (p, _) in PERMS {
            t[idx[p[0]] - 1][idx[p[1]] - 1][idx[p[2]] - 1] = *v;
        }
    }
    t
}

struct Sparse {
    wedge: Vec<(usize, usize, usize, f64)>,
    star: Vec<(usize, usize, usize, f64)>,
}

fn sparse() -> &'static Sparse {
    static SP: OnceLock<Sparse> = OnceLock::new();
    SP.get_or_init(|| {
        let sc = StructureConstants::get();
        let mut wedge = Vec::new();
        let mut star = Vec::new();
        for i in 0..8 {
            for j in 0..8 {
                for k in 0..8 {
                    if sc.f[i][j][k] != 0.0 {
                        wedge.push((i, j, k, SQRT3 * sc.f[i][j][k]));
                    }
                    if sc.d[i][j][k] != 0.0 {
                        star.push((i, j, k, SQRT3 * sc.d[i][j][k]));
                    }
                }
            }
        }
        Sparse { wedge, star }
    })
}

pub(crate) fn wedge(a: &Vec8, b: &Vec8) -> Vec8 {
    let mut out = [0.0; 8];
    for &(i, j, k, v) in &sparse().wedge {
        out[i] += v * a.0[j] * b.0[k];
    }
    Vec8(out)
}

pub(crate) fn star(a: &Vec8, b: &Vec8) -> Vec8 {
    let mut out = [0.0; 8];
    for &(i, j, k, v) in &sparse().star {
        out[i] += v * a.0[j] * b.0[k];
    }
    Vec8(out)
}

/// `a∧b`.
pub fn wedge_product(a: &Vec8, b: &Vec8) -> Vec8 {
    wedge(a, b)
}

/// `a∗b`.
pub fn star_product(a: &Vec8, b: &Vec8) -> Vec8 {
    star(a, b)
}

/// The cubic Casimir invariant `a·(a∗a)` in explicit coordinate form.
pub fn cubic_invariant(a: &Vec8) -> f64 {
    let [a1, a2, a3, a4, a5, a6, a7, a8] = a.0;
    3.0 * a8 * (a1 * a1 + a2 * a2 + a3 * a3) - a8 * a8 * a8
        - 1.5 * a8 * (a4 * a4 + a5 * a5 + a6 * a6 + a7 * a7)
        + 1.5 * SQRT3 * a3 * (a4 * a4 + a5 * a5 - a6 * a6 - a7 * a7)
        + 3.0 * SQRT3 * ((a1 * a6 - a2 * a7) * a4 + (a1 * a7 + a2 * a6) * a5)
}

/// The matrix `a·λ = Σ a_k λ_k`.
pub fn lambda_dot(a: &Vec8) -> CMat3 {
    let s = 1.0 / SQRT3;
    let [a1, a2, a3, a4, a5, a6, a7, a8] = a.0;
    let c = Complex64::new;
    CMat3 {
        m: [
            [c(a3 + s * a8, 0.0), c(a1, -a2), c(a4, -a5)],
            [c(a1, a2), c(-a3 + s * a8, 0.0), c(a6, -a7)],
            [c(a4, a5), c(a6, a7), c(-2.0 * s * a8, 0.0)],
        ],
    }
}

/// Coefficients `c_k = Tr(M λ_k) / 2` of the traceless part of `M`, complex in
/// general.
pub fn lambda_coefficients(m: &CMat3) -> [Complex64; 8] {
    let l = gell_mann();
    std::array::from_fn(|k| (*m * l[k]).trace() * 0.5)
}

/// `ρ = (I + √3 ξ·λ) / 3`.
pub fn bloch_to_density(xi: &Vec8) -> CMat3 {
    (CMat3::IDENTITY + lambda_dot(xi).scale_re(SQRT3)).scale_re(1.0 / 3.0)
}

/// Tolerances used when validating density matrices.
pub const DENSITY_TOL: f64 = 1e-9;

/// Inverts [`bloch_to_density`]: `ξ_i = (√3/2) Tr(ρ λ_i)`.
pub fn density_to_bloch(rho: &CMat3) -> crate::Result<Vec8> {
    if !rho.is_finite() {
        return Err(crate::Error::NonFinite("density matrix entry"));
    }
    let scale = rho.max_abs().max(1.0);
    let herm = rho.hermitian_defect();
    if herm > DENSITY_TOL * scale {
        return Err(crate::Error::NonHermitianInput(herm));
    }
    let tr = rho.trace();
    if (tr - ONE).norm() > DENSITY_TOL * scale {
        return Err(crate::Error::NonUnitTrace(tr.re));
    }
    Ok(bloch_unchecked(rho))
}

/// `(√3/2) Re Tr(ρ λ_i)` without validation.
pub(crate) fn bloch_unchecked(rho: &CMat3) -> Vec8 {
    let c = lambda_coefficients(rho);
    Vec8(std::array::from_fn(|k| SQRT3 * c[k].re))
}

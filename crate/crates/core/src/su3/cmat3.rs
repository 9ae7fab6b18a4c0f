//! Complex 3×3 matrices, row-major.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Copy, PartialEq)]
pub struct CMat3 {
    pub m: [[Complex64; 3]; 3],
}

impl CMat3 {
    pub const ZERO: CMat3 = CMat3 { m: [[ZERO; 3]; 3] };
    pub const IDENTITY: CMat3 = CMat3 {
        m: [[ONE, ZERO, ZERO], [ZERO, ONE, ZERO], [ZERO, ZERO, ONE]],
    };

    pub fn from_fn(f: impl Fn(usize, usize) -> Complex64) -> Self {
        CMat3 {
            m: std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))),
        }
    }

    pub fn from_real(r: [[f64; 3]; 3]) -> Self {
        Self::from_fn(|i, j| Complex64::new(r[i][j], 0.0))
    }

    pub fn diag(d: [Complex64; 3]) -> Self {
        Self::from_fn(|i, j| if i == j { d[i] } else { ZERO })
    }

    pub fn scalar(s: Complex64) -> Self {
        Self::diag([s; 3])
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.m[j][i].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_fn(|i, j| self.m[i][j] * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        Self::from_fn(|i, j| self.m[i][j] * s)
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        (0..3)
            .map(|j| (0..3).map(|i| self.m[i][j].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .fold(0.0_f64, |acc, z| acc.max(z.norm()))
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_diff(&self, other: &CMat3) -> f64 {
        (*self - *other).max_abs()
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermitian_defect(&self) -> f64 {
        self.max_diff(&self.adjoint())
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn commutator(&self, other: &CMat3) -> CMat3 {
        *self * *other - *other * *self
    }

    pub fn anticommutator(&self, other: &CMat3) -> CMat3 {
        *self * *other + *other * *self
    }
}

impl fmt::Debug for CMat3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat3[")?;
        for row in &self.m {
            writeln!(f, "  {:?}", row)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for CMat3 {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.m[i][j]
    }
}

impl IndexMut<(usize, usize)> for CMat3 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.m[i][j]
    }
}

impl Mul for CMat3 {
    type Output = CMat3;
    fn mul(self, rhs: CMat3) -> CMat3 {
        CMat3::from_fn(|i, j| {
            self.m[i][0] * rhs.m[0][j] + self.m[i][1] * rhs.m[1][j] + self.m[i][2] * rhs.m[2][j]
        })
    }
}

impl Add for CMat3 {
    type Output = CMat3;
    fn add(self, rhs: CMat3) -> CMat3 {
        CMat3::from_fn(|i, j| self.m[i][j] + rhs.m[i][j])
    }
}

impl AddAssign for CMat3 {
    fn add_assign(&mut self, rhs: CMat3) {
        *self = *self + rhs;
    }
}

impl Sub for CMat3 {
    type Output = CMat3;
    fn sub(self, rhs: CMat3) -> CMat3 {
        CMat3::from_fn(|i, j| self.m[i][j] - rhs.m[i][j])
    }
}

impl Neg for CMat3 {
    type Output = CMat3;
    fn neg(self) -> CMat3 {
        self.scale_re(-1.0)
    }
}

impl Mul<Complex64> for CMat3 {
    type Output = CMat3;
    fn mul(self, s: Complex64) -> CMat3 {
        self.scale(s)
    }
}

impl Mul<f64> for CMat3 {
    type Output = CMat3;
    fn mul(self, s: f64) -> CMat3 {
        self.scale_re(s)
    }
}

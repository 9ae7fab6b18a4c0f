//! Real 8-vectors: Bloch vectors and the generator vectors `a`, `b`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A real vector in R^8, indexed 0..8 (component `k` of the usual 1-based
/// notation lives at index `k - 1`).
#[derive(Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vec8(pub [f64; 8]);

impl Vec8 {
    pub const ZERO: Vec8 = Vec8([0.0; 8]);

    pub const fn new(x: [f64; 8]) -> Self {
        Vec8(x)
    }

    /// Validating constructor for external input.
    pub fn try_new(x: [f64; 8]) -> Result<Self> {
        let v = Vec8(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite("Vec8 component"))
        }
    }

    pub fn try_from_slice(x: &[f64]) -> Result<Self> {
        let arr: [f64; 8] = x
            .try_into()
            .map_err(|_| Error::DomainError(format!("expected 8 components, got {}", x.len())))?;
        Self::try_new(arr)
    }

    /// Unit vector `e_k`, 1-based (`e(8)` is the λ₈ direction).
    pub fn e(k: usize) -> Self {
        assert!((1..=8).contains(&k), "basis index {k} outside 1..=8");
        let mut v = [0.0; 8];
        v[k - 1] = 1.0;
        Vec8(v)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    pub fn dot(&self, other: &Vec8) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(x, y)| x * y).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn as_array(&self) -> &[f64; 8] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &f64> {
        self.0.iter()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Vec8 {
        Vec8(self.0.map(f))
    }

    /// Antisymmetric wedge product, `(a∧b)_i = √3 f_ijk a_j b_k`.
    pub fn wedge(&self, other: &Vec8) -> Vec8 {
        super::structure::wedge(self, other)
    }

    /// Symmetric star product, `(a∗b)_i = √3 d_ijk a_j b_k`.
    pub fn star(&self, other: &Vec8) -> Vec8 {
        super::structure::star(self, other)
    }

    pub fn dist(&self, other: &Vec8) -> f64 {
        (*self - *other).norm()
    }
}

impl fmt::Debug for Vec8 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vec8{:?}", self.0)
    }
}

impl fmt::Display for Vec8 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl From<[f64; 8]> for Vec8 {
    fn from(x: [f64; 8]) -> Self {
        Vec8(x)
    }
}

impl Index<usize> for Vec8 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vec8 {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add for Vec8 {
    type Output = Vec8;
    fn add(self, rhs: Vec8) -> Vec8 {
        Vec8(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for Vec8 {
    type Output = Vec8;
    fn sub(self, rhs: Vec8) -> Vec8 {
        Vec8(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl AddAssign for Vec8 {
    fn add_assign(&mut self, rhs: Vec8) {
        for (x, y) in self.0.iter_mut().zip(rhs.0) {
            *x += y;
        }
    }
}

impl SubAssign for Vec8 {
    fn sub_assign(&mut self, rhs: Vec8) {
        for (x, y) in self.0.iter_mut().zip(rhs.0) {
            *x -= y;
        }
    }
}

impl Neg for Vec8 {
    type Output = Vec8;
    fn neg(self) -> Vec8 {
        self.map(|x| -x)
    }
}

impl Mul<f64> for Vec8 {
    type Output = Vec8;
    fn mul(self, s: f64) -> Vec8 {
        self.map(|x| x * s)
    }
}

impl Mul<Vec8> for f64 {
    type Output = Vec8;
    fn mul(self, v: Vec8) -> Vec8 {
        v * self
    }
}

impl Div<f64> for Vec8 {
    type Output = Vec8;
    fn div(self, s: f64) -> Vec8 {
        self.map(|x| x / s)
    }
}

impl std::iter::Sum for Vec8 {
    fn sum<I: Iterator<Item = Vec8>>(iter: I) -> Vec8 {
        iter.fold(Vec8::ZERO, |acc, v| acc + v)
    }
}

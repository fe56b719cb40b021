//! The flat indefinite metric g = -dx1^2 + dx2^2 + dx3^2 + dx4^2 and the
//! vector-level operations built on it. The first coordinate is timelike.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used by [`Vec4::normalize`] to refuse near-null input.
pub const NORMALIZE_NULL_TOL: f64 = 1e-12;

/// A point or vector of Minkowski 4-space.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec4 {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub x4: f64,
}

/// Causal character of a vector under the indefinite metric.
///
/// The zero vector counts as spacelike by convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CausalCharacter {
    Spacelike,
    Timelike,
    Null,
}

impl Vec4 {
    pub const fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        Vec4 { x1, x2, x3, x4 }
    }

    pub const ZERO: Vec4 = Vec4::new(0.0, 0.0, 0.0, 0.0);
    /// Timelike coordinate axis.
    pub const E1: Vec4 = Vec4::new(1.0, 0.0, 0.0, 0.0);
    pub const E2: Vec4 = Vec4::new(0.0, 1.0, 0.0, 0.0);
    pub const E3: Vec4 = Vec4::new(0.0, 0.0, 1.0, 0.0);
    pub const E4: Vec4 = Vec4::new(0.0, 0.0, 0.0, 1.0);

    pub fn as_array(&self) -> [f64; 4] {
        [self.x1, self.x2, self.x3, self.x4]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Vec4::new(a[0], a[1], a[2], a[3])
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|c| c.is_finite())
    }

    /// The indefinite inner product g(u, v) = -u1 v1 + u2 v2 + u3 v3 + u4 v4.
    pub fn inner(&self, other: &Vec4) -> f64 {
        -self.x1 * other.x1 + self.x2 * other.x2 + self.x3 * other.x3 + self.x4 * other.x4
    }

    /// g(v, v).
    pub fn inner_sq(&self) -> f64 {
        self.inner(self)
    }

    /// Pseudo-norm sqrt(|g(v, v)|). Vanishes on nonzero null vectors, so it
    /// cannot measure smallness; use [`Vec4::euclid_norm`] for residuals.
    pub fn pseudo_norm(&self) -> f64 {
        self.inner_sq().abs().sqrt()
    }

    /// Auxiliary Euclidean squared norm, used as the scale reference for
    /// null classification and as the residual metric throughout the crate.
    pub fn euclid_sq(&self) -> f64 {
        self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3 + self.x4 * self.x4
    }

    pub fn euclid_norm(&self) -> f64 {
        self.euclid_sq().sqrt()
    }

    /// Classify against a relative null tolerance: |g(v,v)| is compared to
    /// `null_tol * max(1, euclid_sq(v))` so the verdict is scale invariant.
    pub fn causal_character(&self, null_tol: f64) -> CausalCharacter {
        let q = self.inner_sq();
        let threshold = null_tol * self.euclid_sq().max(1.0);
        if q.abs() <= threshold {
            // v = 0 is spacelike by convention.
            if self.euclid_sq() == 0.0 {
                CausalCharacter::Spacelike
            } else {
                CausalCharacter::Null
            }
        } else if q < 0.0 {
            CausalCharacter::Timelike
        } else {
            CausalCharacter::Spacelike
        }
    }

    /// v / ||v||; the result satisfies |g(u,u)| = 1.
    pub fn normalize(&self) -> Result<Vec4> {
        let q = self.inner_sq();
        if q.abs() <= NORMALIZE_NULL_TOL * self.euclid_sq().max(1.0) {
            return Err(Error::NullVector);
        }
        Ok(*self * (1.0 / self.pseudo_norm()))
    }
}

impl Add for Vec4 {
    type Output = Vec4;
    fn add(self, o: Vec4) -> Vec4 {
        Vec4::new(self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3, self.x4 + o.x4)
    }
}

impl Sub for Vec4 {
    type Output = Vec4;
    fn sub(self, o: Vec4) -> Vec4 {
        Vec4::new(self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3, self.x4 - o.x4)
    }
}

impl Neg for Vec4 {
    type Output = Vec4;
    fn neg(self) -> Vec4 {
        Vec4::new(-self.x1, -self.x2, -self.x3, -self.x4)
    }
}

impl Mul<f64> for Vec4 {
    type Output = Vec4;
    fn mul(self, k: f64) -> Vec4 {
        Vec4::new(self.x1 * k, self.x2 * k, self.x3 * k, self.x4 * k)
    }
}

/// Determinant of the 4x4 matrix whose rows are the given vectors.
/// Fixes the orientation of reconstructed frames.
pub fn det4(rows: &[Vec4; 4]) -> f64 {
    let m: Vec<[f64; 4]> = rows.iter().map(|v| v.as_array()).collect();
    let mut det = 0.0;
    for j in 0..4 {
        let minor = det3(&m[1..4], j);
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        det += sign * m[0][j] * minor;
    }
    det
}

fn det3(rows: &[[f64; 4]], skip: usize) -> f64 {
    let cols: Vec<usize> = (0..4).filter(|&c| c != skip).collect();
    let a = |r: usize, c: usize| rows[r][cols[c]];
    a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
        - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
        + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
}

/// The unique (up to sign and scale) vector g-orthogonal to all three inputs.
///
/// Works on the metric-lowered rows so Euclidean cofactors give g-orthogonality.
pub fn orthogonal_complement(u: &Vec4, v: &Vec4, w: &Vec4) -> Vec4 {
    let lower = |a: &Vec4| [-a.x1, a.x2, a.x3, a.x4];
    let rows = [lower(u), lower(v), lower(w)];
    let mut out = [0.0; 4];
    for j in 0..4 {
        let minor = det3(&rows, j);
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        out[j] = sign * minor;
    }
    Vec4::from_array(out)
}

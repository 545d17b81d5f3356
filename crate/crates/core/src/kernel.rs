//! Kernels and an exact finite coordinate system for the span of the
//! training images in the kernel-induced space.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::dot;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kernel {
    /// `xᵀz`
    Linear,
    /// `(xᵀz + 1)³`
    Poly3,
}

impl Kernel {
    #[inline]
    pub fn eval(self, x: &[f64], z: &[f64]) -> f64 {
        match self {
            Kernel::Linear => dot(x, z),
            Kernel::Poly3 => (dot(x, z) + 1.0).powi(3),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kernel::Linear => "linear",
            Kernel::Poly3 => "poly3",
        }
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Kernel::Linear),
            "poly3" => Ok(Kernel::Poly3),
            other => Err(Error::Parse(format!("unknown kernel '{other}'"))),
        }
    }
}

pub fn gram(kernel: Kernel, points: &[&[f64]]) -> DMatrix<f64> {
    let n = points.len();
    let mut k = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = kernel.eval(points[i], points[j]);
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
    k
}

/// Orthonormal coordinates of the centered training images `φ(x_i) − φ̄`.
///
/// The basis spans exactly the directions in which the training images
/// differ, so any weight vector `w` expressed in it acts on a new point as
/// `w·z(x) = Σ_i α_i K(x_i, x) − offset(α)` (see [`SpanEmbedding::dual`]).
#[derive(Debug, Clone)]
pub struct SpanEmbedding {
    /// `n × r` coordinates of the training images.
    pub coords: Vec<Vec<f64>>,
    /// `U_r Λ_r^{-1/2}`, mapping coordinates to dual weights.
    to_dual: DMatrix<f64>,
    /// Row means of the Gram matrix.
    row_means: Vec<f64>,
}

/// Eigenvalues below this fraction of the largest are treated as zero.
const RANK_TOL: f64 = 1e-11;

impl SpanEmbedding {
    pub fn new(kernel: Kernel, points: &[&[f64]]) -> Result<Self> {
        let n = points.len();
        let k = gram(kernel, points);
        let row_means: Vec<f64> = (0..n).map(|i| k.row(i).sum() / n as f64).collect();
        let grand = row_means.iter().sum::<f64>() / n as f64;
        let kc = DMatrix::from_fn(n, n, |i, j| k[(i, j)] - row_means[i] - row_means[j] + grand);
        let eig = kc.symmetric_eigen();
        let top = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
        if !(top > 0.0) {
            return Err(Error::Degenerate("all training images coincide in feature space".into()));
        }
        let mut keep: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] > RANK_TOL * top).collect();
        // descending eigenvalue order for reproducible coordinates
        keep.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let r = keep.len();
        let coords = (0..n)
            .map(|i| {
                keep.iter()
                    .map(|&c| eig.eigenvectors[(i, c)] * eig.eigenvalues[c].sqrt())
                    .collect()
            })
            .collect();
        let to_dual = DMatrix::from_fn(n, r, |i, j| {
            let c = keep[j];
            eig.eigenvectors[(i, c)] / eig.eigenvalues[c].sqrt()
        });
        Ok(Self {
            coords,
            to_dual,
            row_means,
        })
    }

    pub fn rank(&self) -> usize {
        self.to_dual.ncols()
    }

    /// Dual form of `x ↦ w·z(x) + b`: weights `α` on the training points and
    /// a bias such that the same affine function equals `Σ α_i K(x_i, x) + bias`.
    pub fn dual(&self, w: &[f64], b: f64) -> (Vec<f64>, f64) {
        let n = self.row_means.len();
        let mut alpha: Vec<f64> = (0..n)
            .map(|i| (0..self.rank()).map(|j| self.to_dual[(i, j)] * w[j]).sum())
            .collect();
        // the basis is orthogonal to the all-ones vector; remove rounding drift
        let mean = alpha.iter().sum::<f64>() / n as f64;
        alpha.iter_mut().for_each(|a| *a -= mean);
        let bias = b - dot(&alpha, &self.row_means);
        (alpha, bias)
    }
}

use serde::{Deserialize, Serialize};

use super::Classifier;
use crate::data::LabeledDataset;
use crate::error::Result;
use crate::geometry::class_balls;
use crate::linalg::{dist, dot};

/// Nearest center classifier on minimax class centers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NccModel {
    pub dim: usize,
    /// One center per class.
    pub centers: Vec<Vec<f64>>,
    /// Enclosing radius of each class, kept for inspection.
    pub radii: Vec<f64>,
}

pub fn train_ncc(data: &LabeledDataset) -> Result<NccModel> {
    data.require_class_sizes(1)?;
    let balls = class_balls(data)?;
    Ok(NccModel {
        dim: data.dim(),
        radii: balls.iter().map(|b| b.radius).collect(),
        centers: balls.into_iter().map(|b| b.center).collect(),
    })
}

impl NccModel {
    pub fn center_distances(&self, x: &[f64]) -> Vec<f64> {
        self.centers.iter().map(|c| dist(c, x)).collect()
    }
}

impl Classifier for NccModel {
    fn dim(&self) -> usize {
        self.dim
    }

    fn class_count(&self) -> usize {
        self.centers.len()
    }

    fn raw_score(&self, x: &[f64]) -> f64 {
        dist(&self.centers[1], x) - dist(&self.centers[0], x)
    }

    fn raw_predict(&self, x: &[f64]) -> usize {
        if self.centers.len() == 2 {
            return if self.raw_score(x) >= 0.0 { 0 } else { 1 };
        }
        let d = self.center_distances(x);
        (0..d.len()).fold(0, |best, j| if d[j] < d[best] { j } else { best })
    }

    /// Projection onto the perpendicular bisector of the two centers.
    fn raw_boundary_point(&self, x: &[f64]) -> Option<Vec<f64>> {
        let (a, b) = (&self.centers[0], &self.centers[1]);
        let n: Vec<f64> = a.iter().zip(b).map(|(p, q)| p - q).collect();
        let nn = dot(&n, &n);
        if nn == 0.0 {
            return None;
        }
        let off: f64 = x
            .iter()
            .zip(a.iter().zip(b))
            .zip(&n)
            .map(|((xi, (p, q)), ni)| (xi - 0.5 * (p + q)) * ni)
            .sum();
        let t = off / nn;
        Some(x.iter().zip(&n).map(|(xi, ni)| xi - t * ni).collect())
    }
}

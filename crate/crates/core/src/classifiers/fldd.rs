use serde::{Deserialize, Serialize};

use super::{Classifier, Hyperplane};
use crate::data::LabeledDataset;
use crate::error::{Error, Result};
use crate::geometry::{class_balls, min_enclosing_ball, pooled_whitening, WhiteningTransform};
use crate::linalg::dot;

/// Domain Fisher discriminant: the boundary is the set of points at equal
/// whitened distance from the two class centers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlddModel {
    pub dim: usize,
    /// Unit normal and offset; positive side is class 0.
    pub plane: Hyperplane,
    pub whitening: WhiteningTransform,
    pub centers: Vec<Vec<f64>>,
    /// Domain Fisher criterion of the trained direction on the training set.
    pub fisher_criterion: f64,
}

pub fn train_fldd(data: &LabeledDataset) -> Result<FlddModel> {
    data.require_two_class()?;
    let data = data.deduplicate();
    data.require_class_sizes(1)?;
    let centers: Vec<Vec<f64>> = class_balls(&data)?.into_iter().map(|b| b.center).collect();
    let whitening = pooled_whitening(&data, &centers)?;
    let metric = whitening.metric();
    let m = data.dim();
    let diff: Vec<f64> = centers[0].iter().zip(&centers[1]).map(|(a, b)| a - b).collect();
    // ‖T(x−μ₂)‖² − ‖T(x−μ₁)‖² = 2 (wᵀx − wᵀ(μ₁+μ₂)/2) with w = M(μ₁−μ₂)
    let w: Vec<f64> = (0..m).map(|i| (0..m).map(|j| metric[(i, j)] * diff[j]).sum()).collect();
    let mid: Vec<f64> = centers[0].iter().zip(&centers[1]).map(|(a, b)| 0.5 * (a + b)).collect();
    let plane = Hyperplane {
        bias: -dot(&w, &mid),
        weights: w,
    }
    .normalized()
    .ok_or_else(|| Error::Degenerate("class centers coincide".into()))?;
    let fisher_criterion = domain_fisher_criterion(&data, &plane.weights)?;
    Ok(FlddModel {
        dim: m,
        plane,
        whitening,
        centers,
        fisher_criterion,
    })
}

/// Domain version of the Fisher criterion along `direction`: squared distance
/// of the projected class centers over the sum of squared projected ranges.
/// Infinite when both projected ranges vanish but the centers differ.
pub fn domain_fisher_criterion(data: &LabeledDataset, direction: &[f64]) -> Result<f64> {
    data.require_two_class()?;
    data.require_class_sizes(1)?;
    if direction.len() != data.dim() {
        return Err(Error::DimensionMismatch {
            expected: data.dim(),
            got: direction.len(),
        });
    }
    let mut stats = [(0.0, 0.0); 2];
    for (class, s) in stats.iter_mut().enumerate() {
        let proj: Vec<Vec<f64>> = data
            .class_points(class)
            .iter()
            .map(|p| vec![dot(p, direction)])
            .collect();
        let refs: Vec<&[f64]> = proj.iter().map(Vec::as_slice).collect();
        let ball = min_enclosing_ball(&refs)?;
        let width = 2.0 * ball.radius;
        *s = (ball.center[0], width * width);
    }
    let num = (stats[0].0 - stats[1].0).powi(2);
    let den = stats[0].1 + stats[1].1;
    Ok(if den == 0.0 {
        if num == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        num / den
    })
}

impl Classifier for FlddModel {
    fn dim(&self) -> usize {
        self.dim
    }

    fn class_count(&self) -> usize {
        2
    }

    fn raw_score(&self, x: &[f64]) -> f64 {
        self.plane.eval(x)
    }

    fn raw_boundary_point(&self, x: &[f64]) -> Option<Vec<f64>> {
        self.plane.project(x)
    }
}

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use serde::{Deserialize, Serialize};

use super::{Classifier, Hyperplane};
use crate::data::LabeledDataset;
use crate::error::{Error, Result};

/// Linear network fitted to targets ±1 under the worst squared residual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxErrorLinearModel {
    pub dim: usize,
    pub plane: Hyperplane,
    /// `max (w·x + b − t(x))²` over the training objects.
    pub worst_residual: f64,
}

/// Minimises the largest absolute residual, i.e. the Chebyshev fit
/// `min s` subject to `|w·xᵢ + b − tᵢ| ≤ s`, solved exactly as a linear
/// program. Squaring is monotone, so this also minimises the worst squared
/// residual.
pub fn train_max_error_linear(data: &LabeledDataset) -> Result<MaxErrorLinearModel> {
    data.require_two_class()?;
    let data = data.deduplicate();
    data.require_class_sizes(1)?;
    let m = data.dim();
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let w: Vec<_> = (0..m).map(|_| lp.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY))).collect();
    let b = lp.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY));
    let s = lp.add_var(1.0, (0.0, f64::INFINITY));
    for i in 0..data.len() {
        let t = data.signed_label(i);
        let mut row: Vec<_> = w
            .iter()
            .zip(data.point(i))
            .filter(|(_, &x)| x != 0.0)
            .map(|(&v, &x)| (v, x))
            .collect();
        row.push((b, 1.0));
        let mut upper = row.clone();
        upper.push((s, -1.0));
        lp.add_constraint(upper.as_slice(), ComparisonOp::Le, t);
        row.push((s, 1.0));
        lp.add_constraint(row.as_slice(), ComparisonOp::Ge, t);
    }
    let sol = lp.solve().map_err(|e| Error::Solver(e.to_string()))?;
    let plane = Hyperplane {
        weights: w.iter().map(|&v| *sol.var_value(v)).collect(),
        bias: *sol.var_value(b),
    };
    let worst_residual = (0..data.len())
        .map(|i| (plane.eval(data.point(i)) - data.signed_label(i)).powi(2))
        .fold(0.0, f64::max);
    Ok(MaxErrorLinearModel {
        dim: m,
        plane,
        worst_residual,
    })
}

impl Classifier for MaxErrorLinearModel {
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

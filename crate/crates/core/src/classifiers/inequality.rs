use serde::{Deserialize, Serialize};

use super::Classifier;
use crate::data::LabeledDataset;
use crate::error::Result;
use crate::kernel::{gram, Kernel};

/// Discriminant `Σ αᵢ K(xᵢ, x) + α₀` from the training inequalities
/// `yᵢ(αᵀK(X, xᵢ) + α₀) > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelInequalityModel {
    pub dim: usize,
    pub kernel: Kernel,
    pub points: Vec<Vec<f64>>,
    pub dual_weights: Vec<f64>,
    pub bias: f64,
    /// Full passes over the training set that were run.
    pub epochs: usize,
}

/// Result of solving the inequalities. Failure keeps the last iterate.
#[derive(Debug, Clone, PartialEq)]
pub enum InequalityOutcome {
    Separated(KernelInequalityModel),
    Failed {
        model: KernelInequalityModel,
        violations: usize,
    },
}

impl InequalityOutcome {
    pub fn is_separated(&self) -> bool {
        matches!(self, InequalityOutcome::Separated(_))
    }

    pub fn model(&self) -> &KernelInequalityModel {
        match self {
            InequalityOutcome::Separated(m) | InequalityOutcome::Failed { model: m, .. } => m,
        }
    }
}

/// Kernel perceptron: each violated inequality adds `yᵢ` to `αᵢ` and `α₀`,
/// until a full pass finds none violated or `max_epochs` passes are spent.
pub fn train_kernel_inequality(data: &LabeledDataset, kernel: Kernel, max_epochs: usize) -> Result<InequalityOutcome> {
    data.require_two_class()?;
    let data = data.deduplicate();
    data.require_class_sizes(1)?;
    let pts: Vec<&[f64]> = data.points().collect();
    let k = gram(kernel, &pts);
    let n = pts.len();
    let y: Vec<f64> = (0..n).map(|i| data.signed_label(i)).collect();
    let mut alpha = vec![0.0; n];
    let mut bias = 0.0;
    let value = |alpha: &[f64], bias: f64, i: usize| -> f64 { (0..n).map(|j| alpha[j] * k[(j, i)]).sum::<f64>() + bias };
    let mut epochs = 0;
    let mut separated = false;
    while epochs < max_epochs {
        epochs += 1;
        let mut updated = false;
        for i in 0..n {
            if y[i] * value(&alpha, bias, i) <= 0.0 {
                alpha[i] += y[i];
                bias += y[i];
                updated = true;
            }
        }
        if !updated {
            separated = true;
            break;
        }
    }
    let violations = (0..n).filter(|&i| y[i] * value(&alpha, bias, i) <= 0.0).count();
    let model = KernelInequalityModel {
        dim: data.dim(),
        kernel,
        points: pts.iter().map(|p| p.to_vec()).collect(),
        dual_weights: alpha,
        bias,
        epochs,
    };
    Ok(if separated || violations == 0 {
        InequalityOutcome::Separated(model)
    } else {
        InequalityOutcome::Failed { model, violations }
    })
}

impl Classifier for KernelInequalityModel {
    fn dim(&self) -> usize {
        self.dim
    }

    fn class_count(&self) -> usize {
        2
    }

    fn raw_score(&self, x: &[f64]) -> f64 {
        self.dual_weights
            .iter()
            .zip(&self.points)
            .map(|(a, p)| a * self.kernel.eval(p, x))
            .sum::<f64>()
            + self.bias
    }
}

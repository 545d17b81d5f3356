use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Classifier, Hyperplane};
use crate::data::LabeledDataset;
use crate::error::{invalid, Result};
use crate::linalg::{dot, norm};
use crate::rng::RngSeed;

const RESTARTS: usize = 5;
const ITERATIONS: usize = 20_000;

/// Sum-of-errors soft-margin hyperplane. Unlike the domain-based kinds it
/// trains on the data as given, so repeated objects weigh more.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoftMarginBaseline {
    pub dim: usize,
    pub plane: Hyperplane,
    pub penalty: f64,
    /// `Σ max(0, 1 − yᵢ(w·xᵢ + b))`.
    pub slack_sum: f64,
    /// `‖w‖² + penalty · slack_sum`.
    pub objective: f64,
}

pub fn train_soft_margin_baseline(data: &LabeledDataset, penalty: f64) -> Result<SoftMarginBaseline> {
    train_soft_margin_baseline_with(data, penalty, RngSeed(0x736f_6674))
}

/// Full-batch subgradient descent with normalised, decaying steps from
/// several seeded starts; the best iterate seen is kept.
pub fn train_soft_margin_baseline_with(data: &LabeledDataset, penalty: f64, seed: RngSeed) -> Result<SoftMarginBaseline> {
    data.require_two_class()?;
    data.require_class_sizes(1)?;
    if !(penalty > 0.0 && penalty.is_finite()) {
        return Err(invalid("penalty must be positive"));
    }
    let m = data.dim();
    let signs: Vec<f64> = (0..data.len()).map(|i| data.signed_label(i)).collect();
    let radius = 1.0 + data.points().map(norm).fold(0.0, f64::max);
    let objective = |w: &[f64], b: f64| -> (f64, f64) {
        let slack: f64 = data
            .points()
            .zip(&signs)
            .map(|(x, y)| (1.0 - y * (dot(w, x) + b)).max(0.0))
            .sum();
        (dot(w, w) + penalty * slack, slack)
    };
    let mut rng = seed.rng();
    let mut best: Option<(f64, Vec<f64>, f64)> = None;
    for _ in 0..RESTARTS {
        let mut w: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0) / radius).collect();
        let mut b = rng.gen_range(-1.0..1.0);
        let step0 = 1.0 / radius;
        for t in 0..ITERATIONS {
            let (f, _) = objective(&w, b);
            if best.as_ref().is_none_or(|(bf, _, _)| f < *bf) {
                best = Some((f, w.clone(), b));
            }
            let mut gw: Vec<f64> = w.iter().map(|x| 2.0 * x).collect();
            let mut gb = 0.0;
            for (x, y) in data.points().zip(&signs) {
                if y * (dot(&w, x) + b) < 1.0 {
                    gw.iter_mut().zip(x).for_each(|(g, xi)| *g -= penalty * y * xi);
                    gb -= penalty * y;
                }
            }
            let gn = (dot(&gw, &gw) + gb * gb).sqrt();
            if gn == 0.0 {
                break;
            }
            let eta = step0 / ((t + 1) as f64).sqrt() / gn;
            w.iter_mut().zip(&gw).for_each(|(wi, g)| *wi -= eta * g);
            b -= eta * gb;
        }
    }
    let (objective_value, weights, bias) = best.expect("at least one iterate");
    let (_, slack_sum) = objective(&weights, bias);
    Ok(SoftMarginBaseline {
        dim: m,
        plane: Hyperplane { weights, bias },
        penalty,
        slack_sum,
        objective: objective_value,
    })
}

impl Classifier for SoftMarginBaseline {
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

//! Domain-based decision functions behind one [`Classifier`] contract.
//!
//! Sign convention for every two-class model: `score(x) ≥ 0` assigns class 0
//! (ω₁, signed label +1), `score(x) < 0` assigns class 1 (ω₂, −1). A point
//! exactly on the boundary therefore goes to ω₁.
//!
//! Every domain-based trainer drops exact duplicate training objects first, so
//! replicating an object cannot change the trained model. The soft-margin
//! baseline is the deliberate exception.

mod fldd;
mod inequality;
mod kernel_domain;
mod margin;
mod max_error;
mod ncc;
mod soft_margin;
mod tree;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use fldd::{domain_fisher_criterion, train_fldd, FlddModel};
pub use inequality::{train_kernel_inequality, InequalityOutcome, KernelInequalityModel};
pub use kernel_domain::{train_kernel_domain, KernelDomainModel};
pub use margin::{
    best_bias_margin, train_negative_margin, train_negative_margin_with, MarginModel, MarginOptions,
};
pub use max_error::{train_max_error_linear, MaxErrorLinearModel};
pub use ncc::{train_ncc, NccModel};
pub use soft_margin::{train_soft_margin_baseline, train_soft_margin_baseline_with, SoftMarginBaseline};
pub use tree::{train_purity_tree, PurityTreeModel, TreeNode, DEFAULT_MAX_DEPTH};

use crate::data::LabeledDataset;
use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::linalg::{dist, dot, norm};
use crate::rng::RngSeed;

/// Uniform contract over trained models.
///
/// Implementors provide the unchecked `raw_*` methods; callers use the
/// checked wrappers, which validate the input dimension.
pub trait Classifier {
    fn dim(&self) -> usize;

    fn class_count(&self) -> usize;

    /// Two-class signed score without input validation.
    fn raw_score(&self, x: &[f64]) -> f64;

    fn raw_predict(&self, x: &[f64]) -> usize {
        if self.raw_score(x) >= 0.0 {
            0
        } else {
            1
        }
    }

    /// Nearest point of the decision boundary, for kinds where it is known
    /// in closed form (or by an exact convex projection).
    fn raw_boundary_point(&self, _x: &[f64]) -> Option<Vec<f64>> {
        None
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    fn score(&self, x: &[f64]) -> Result<f64> {
        self.check_input(x)?;
        if self.class_count() != 2 {
            return Err(Error::Unsupported("signed score needs a two-class model".into()));
        }
        Ok(self.raw_score(x))
    }

    fn predict(&self, x: &[f64]) -> Result<usize> {
        self.check_input(x)?;
        Ok(self.raw_predict(x))
    }

    /// Euclidean distance from `x` to the decision boundary, where exact.
    fn analytic_boundary_distance(&self, x: &[f64]) -> Result<Option<f64>> {
        self.check_input(x)?;
        if self.class_count() != 2 {
            return Ok(None);
        }
        Ok(self.raw_boundary_point(x).map(|p| dist(&p, x)))
    }
}

/// Affine function `w·x + b` shared by the linear kinds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperplane {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl Hyperplane {
    #[inline]
    pub fn eval(&self, x: &[f64]) -> f64 {
        dot(&self.weights, x) + self.bias
    }

    /// Orthogonal projection of `x` onto `w·x + b = 0`.
    pub fn project(&self, x: &[f64]) -> Option<Vec<f64>> {
        let ww = dot(&self.weights, &self.weights);
        if ww == 0.0 {
            return None;
        }
        let t = self.eval(x) / ww;
        Some(x.iter().zip(&self.weights).map(|(xi, wi)| xi - t * wi).collect())
    }

    /// `(w, b) / ‖w‖`.
    pub fn normalized(&self) -> Option<Hyperplane> {
        let n = norm(&self.weights);
        (n > 0.0).then(|| Hyperplane {
            weights: self.weights.iter().map(|w| w / n).collect(),
            bias: self.bias / n,
        })
    }
}

/// Any trained model, tagged by kind. Serialises to a self-describing TOML
/// document whose `kind` key selects the variant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DecisionModel {
    Ncc(NccModel),
    Fldd(FlddModel),
    PurityTree(PurityTreeModel),
    KernelDomain(KernelDomainModel),
    NegativeMargin(MarginModel),
    MaxErrorLinear(MaxErrorLinearModel),
    SoftMargin(SoftMarginBaseline),
    KernelInequality(KernelInequalityModel),
}

impl DecisionModel {
    pub fn kind(&self) -> &'static str {
        match self {
            DecisionModel::Ncc(_) => "ncc",
            DecisionModel::Fldd(_) => "fldd",
            DecisionModel::PurityTree(_) => "purity_tree",
            DecisionModel::KernelDomain(_) => "kernel_domain",
            DecisionModel::NegativeMargin(_) => "negative_margin",
            DecisionModel::MaxErrorLinear(_) => "max_error_linear",
            DecisionModel::SoftMargin(_) => "soft_margin",
            DecisionModel::KernelInequality(_) => "kernel_inequality",
        }
    }

    fn inner(&self) -> &dyn Classifier {
        match self {
            DecisionModel::Ncc(m) => m,
            DecisionModel::Fldd(m) => m,
            DecisionModel::PurityTree(m) => m,
            DecisionModel::KernelDomain(m) => m,
            DecisionModel::NegativeMargin(m) => m,
            DecisionModel::MaxErrorLinear(m) => m,
            DecisionModel::SoftMargin(m) => m,
            DecisionModel::KernelInequality(m) => m,
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_toml()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }
}

impl Classifier for DecisionModel {
    fn dim(&self) -> usize {
        self.inner().dim()
    }

    fn class_count(&self) -> usize {
        self.inner().class_count()
    }

    fn raw_score(&self, x: &[f64]) -> f64 {
        self.inner().raw_score(x)
    }

    fn raw_predict(&self, x: &[f64]) -> usize {
        self.inner().raw_predict(x)
    }

    fn raw_boundary_point(&self, x: &[f64]) -> Option<Vec<f64>> {
        self.inner().raw_boundary_point(x)
    }
}

/// Trainer selection with its parameters, as named in configs and on the
/// command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClassifierSpec {
    Ncc,
    Fldd,
    PurityTree {
        #[serde(default = "default_depth")]
        max_depth: usize,
    },
    KernelDomain,
    NegativeMargin {
        kernel: Kernel,
        #[serde(default = "default_restarts")]
        restarts: usize,
    },
    MaxErrorLinear,
    SoftMargin {
        #[serde(default = "default_penalty")]
        penalty: f64,
    },
    KernelInequality {
        kernel: Kernel,
        #[serde(default = "default_epochs")]
        max_epochs: usize,
    },
}

fn default_depth() -> usize {
    DEFAULT_MAX_DEPTH
}

fn default_restarts() -> usize {
    MarginOptions::default().restarts
}

fn default_penalty() -> f64 {
    1.0
}

fn default_epochs() -> usize {
    1000
}

impl ClassifierSpec {
    /// Train on `data`. `seed` feeds the kinds with randomised restarts.
    /// A kernel-inequality run that does not separate the data is an error
    /// here; call [`train_kernel_inequality`] directly to inspect it.
    pub fn train(&self, data: &LabeledDataset, seed: RngSeed) -> Result<DecisionModel> {
        Ok(match self {
            ClassifierSpec::Ncc => DecisionModel::Ncc(train_ncc(data)?),
            ClassifierSpec::Fldd => DecisionModel::Fldd(train_fldd(data)?),
            ClassifierSpec::PurityTree { max_depth } => DecisionModel::PurityTree(train_purity_tree(data, *max_depth)?),
            ClassifierSpec::KernelDomain => DecisionModel::KernelDomain(train_kernel_domain(data)?),
            ClassifierSpec::NegativeMargin { kernel, restarts } => {
                let opts = MarginOptions {
                    restarts: *restarts,
                    seed,
                    ..MarginOptions::default()
                };
                DecisionModel::NegativeMargin(train_negative_margin_with(data, *kernel, &opts)?)
            }
            ClassifierSpec::MaxErrorLinear => DecisionModel::MaxErrorLinear(train_max_error_linear(data)?),
            ClassifierSpec::SoftMargin { penalty } => {
                DecisionModel::SoftMargin(train_soft_margin_baseline_with(data, *penalty, seed)?)
            }
            ClassifierSpec::KernelInequality { kernel, max_epochs } => {
                match train_kernel_inequality(data, *kernel, *max_epochs)? {
                    InequalityOutcome::Separated(m) => DecisionModel::KernelInequality(m),
                    InequalityOutcome::Failed { violations, .. } => {
                        return Err(Error::Solver(format!(
                            "linear inequalities not satisfied after {max_epochs} epochs ({violations} violated)"
                        )))
                    }
                }
            }
        })
    }
}

impl fmt::Display for ClassifierSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassifierSpec::Ncc => f.write_str("ncc"),
            ClassifierSpec::Fldd => f.write_str("fldd"),
            ClassifierSpec::PurityTree { .. } => f.write_str("tree"),
            ClassifierSpec::KernelDomain => f.write_str("kernel-domain"),
            ClassifierSpec::NegativeMargin { kernel, .. } => write!(f, "nmsvm-{kernel}"),
            ClassifierSpec::MaxErrorLinear => f.write_str("max-error"),
            ClassifierSpec::SoftMargin { .. } => f.write_str("soft-margin"),
            ClassifierSpec::KernelInequality { kernel, .. } => write!(f, "inequality-{kernel}"),
        }
    }
}

/// Short identifiers: `ncc`, `fldd`, `tree`, `kernel-domain`, `nmsvm-linear`,
/// `nmsvm-poly3`, `max-error`, `soft-margin`, `inequality-linear`,
/// `inequality-poly3`. Parameters take their defaults.
impl FromStr for ClassifierSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "ncc" => ClassifierSpec::Ncc,
            "fldd" => ClassifierSpec::Fldd,
            "tree" => ClassifierSpec::PurityTree {
                max_depth: DEFAULT_MAX_DEPTH,
            },
            "kernel-domain" => ClassifierSpec::KernelDomain,
            "max-error" => ClassifierSpec::MaxErrorLinear,
            "soft-margin" => ClassifierSpec::SoftMargin { penalty: 1.0 },
            other => {
                if let Some(k) = other.strip_prefix("nmsvm-") {
                    ClassifierSpec::NegativeMargin {
                        kernel: k.parse()?,
                        restarts: default_restarts(),
                    }
                } else if let Some(k) = other.strip_prefix("inequality-") {
                    ClassifierSpec::KernelInequality {
                        kernel: k.parse()?,
                        max_epochs: default_epochs(),
                    }
                } else {
                    return Err(Error::Parse(format!("unknown classifier '{other}'")));
                }
            }
        })
    }
}

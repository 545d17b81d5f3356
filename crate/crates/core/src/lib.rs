//! Domain-based classification.
//!
//! Classifiers in this crate are trained from the *domains* occupied by each
//! class (extreme points, enclosing balls, nearest-neighbour coverage) rather
//! than from class densities, so replicating a training object never changes
//! the result. Performance is measured by the worst signed input-space
//! distance between a test object and the decision boundary.
//!
//! Layout:
//! - [`data`]: labelled datasets, CSV I/O, the banana generator, nested subsets.
//! - [`geometry`]: minimum enclosing balls, minimax centers, class ranges, whitening.
//! - [`classifiers`]: every trainer behind the [`classifiers::Classifier`] contract.
//! - [`eval`]: the worst-case criteria and the stochastic boundary-probing procedure.
//! - [`experiment`]: the learning-curve harness and SVG plotting.

pub mod classifiers;
pub mod data;
pub mod error;
pub mod eval;
pub mod experiment;
pub mod geometry;
pub mod kernel;
pub mod rng;

mod linalg;

pub use classifiers::{Classifier, DecisionModel};
pub use data::{DistanceMatrix, LabeledDataset};
pub use error::{Error, Result};
pub use rng::RngSeed;

//! Domain-based performance measures in the common input space.
//!
//! [`eta_criterion`] works on raw scores and is only comparable within one
//! model family. [`boundary_signed_distances`] estimates the input-space
//! distance of every test object to the decision boundary, which is what
//! makes different classifiers comparable.

mod probe;

use std::cmp::Ordering;
use std::io::Write;

use serde::{Deserialize, Serialize};

pub use probe::boundary_signed_distances;

use crate::classifiers::Classifier;
use crate::data::LabeledDataset;
use crate::error::{invalid, Error, Result};
use crate::linalg::sq_dist;
use crate::rng::RngSeed;

/// Parameters of the stochastic boundary search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeConfig {
    /// Probes drawn around each test object.
    #[serde(default = "defaults::probes")]
    pub probes_per_test_object: usize,
    /// Probe spread as a multiple of the median nearest-neighbor distance
    /// within the test set.
    #[serde(default = "defaults::scale")]
    pub neighborhood_scale: f64,
    /// Opposite-label probes kept per test object.
    #[serde(default = "defaults::k")]
    pub k_opposite: usize,
    /// Interpolated points per pair of endpoints.
    #[serde(default = "defaults::interpolation")]
    pub interpolation_count: usize,
    /// Bisection stops once the bracket is shorter than this fraction of the
    /// test-set diameter.
    #[serde(default = "defaults::tolerance")]
    pub bisection_tolerance: f64,
    #[serde(default = "defaults::seed")]
    pub seed: RngSeed,
}

mod defaults {
    use crate::rng::RngSeed;

    pub fn probes() -> usize {
        200
    }
    pub fn scale() -> f64 {
        2.0
    }
    pub fn k() -> usize {
        5
    }
    pub fn interpolation() -> usize {
        3
    }
    pub fn tolerance() -> f64 {
        1e-4
    }
    pub fn seed() -> RngSeed {
        RngSeed(0x7072_6f62)
    }
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            probes_per_test_object: defaults::probes(),
            neighborhood_scale: defaults::scale(),
            k_opposite: defaults::k(),
            interpolation_count: defaults::interpolation(),
            bisection_tolerance: defaults::tolerance(),
            seed: defaults::seed(),
        }
    }
}

impl ProbeConfig {
    /// Parses and validates; missing keys take their defaults.
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.probes_per_test_object == 0 || self.k_opposite == 0 {
            return Err(invalid("probes_per_test_object and k_opposite must be positive"));
        }
        if !(self.neighborhood_scale > 0.0 && self.neighborhood_scale.is_finite()) {
            return Err(invalid("neighborhood_scale must be positive"));
        }
        if !(self.bisection_tolerance > 0.0) {
            return Err(invalid("bisection_tolerance must be positive"));
        }
        if self.bisection_tolerance >= self.neighborhood_scale {
            return Err(invalid("bisection_tolerance must be below neighborhood_scale"));
        }
        Ok(())
    }
}

/// Outcome for one test object.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectDistance {
    pub true_label: usize,
    pub predicted: usize,
    /// Positive when the model labels the object correctly, negative
    /// otherwise; `+∞` when no boundary was found.
    pub signed_distance: f64,
    /// Midpoint of the final bisection bracket.
    pub boundary_point: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub objects: Vec<ObjectDistance>,
    /// Minimum signed distance over the test objects.
    pub e_s: f64,
    pub eta: Option<f64>,
    pub d_max: Option<f64>,
    /// Absolute bisection tolerance that was used.
    pub tolerance: f64,
}

impl EvalReport {
    pub fn signed_distances(&self) -> Vec<f64> {
        self.objects.iter().map(|o| o.signed_distance).collect()
    }

    /// Objects for which no opposite-label probe existed.
    pub fn unresolved(&self) -> usize {
        self.objects.iter().filter(|o| o.boundary_point.is_none()).count()
    }

    pub fn is_complete(&self) -> bool {
        self.unresolved() == 0
    }

    /// One row per test object: `index,true_label,predicted_label,
    /// signed_distance,c1..cm` with labels as ±1 and empty boundary
    /// coordinates for unresolved objects.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let dim = self
            .objects
            .iter()
            .find_map(|o| o.boundary_point.as_ref().map(Vec::len))
            .unwrap_or(0);
        let mut w = csv::Writer::from_writer(writer);
        let mut header: Vec<String> = ["index", "true_label", "predicted_label", "signed_distance"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        header.extend((1..=dim).map(|k| format!("c{k}")));
        w.write_record(&header)?;
        for (i, o) in self.objects.iter().enumerate() {
            let mut rec = vec![
                i.to_string(),
                signed_text(o.true_label),
                signed_text(o.predicted),
                o.signed_distance.to_string(),
            ];
            match &o.boundary_point {
                Some(p) => rec.extend(p.iter().map(f64::to_string)),
                None => rec.extend(std::iter::repeat_n(String::new(), dim)),
            }
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn summary_line(&self) -> String {
        let opt = |v: Option<f64>| v.map_or_else(|| "na".to_string(), |x| x.to_string());
        format!(
            "e_S={} eta={} d_max={} objects={} unresolved={}",
            self.e_s,
            opt(self.eta),
            opt(self.d_max),
            self.objects.len(),
            self.unresolved()
        )
    }
}

fn signed_text(label: usize) -> String {
    if label == 0 { "1" } else { "-1" }.to_string()
}

/// Minimum over test objects of the true-label-signed score.
pub fn eta_criterion<M: Classifier + ?Sized>(model: &M, test: &LabeledDataset) -> Result<f64> {
    test.require_two_class()?;
    if test.is_empty() {
        return Err(invalid("empty test set"));
    }
    let mut eta = f64::INFINITY;
    for i in 0..test.len() {
        eta = eta.min(test.signed_label(i) * model.score(test.point(i))?);
    }
    Ok(eta)
}

/// Orders two models by η on the same test set; `Greater` means `a` is
/// better. Only meaningful when both produce scores on the same scale.
pub fn compare_by_eta<A, B>(a: &A, b: &B, test: &LabeledDataset) -> Result<Ordering>
where
    A: Classifier + ?Sized,
    B: Classifier + ?Sized,
{
    let (ea, eb) = (eta_criterion(a, test)?, eta_criterion(b, test)?);
    ea.partial_cmp(&eb)
        .ok_or_else(|| Error::Degenerate("eta is not a number".into()))
}

/// Largest distance from a reference object to its nearest test object.
///
/// The reference set stands in for "every point of the domain", which cannot
/// be enumerated; pass a held-out pool or a fresh draw from the generator.
pub fn representativeness_dmax(reference: &LabeledDataset, test: &LabeledDataset) -> Result<f64> {
    if reference.is_empty() || test.is_empty() {
        return Err(invalid("reference and test sets must be non-empty"));
    }
    if reference.dim() != test.dim() {
        return Err(Error::DimensionMismatch {
            expected: test.dim(),
            got: reference.dim(),
        });
    }
    let mut worst = 0.0f64;
    for r in reference.points() {
        let nearest = test.points().map(|s| sq_dist(r, s)).fold(f64::INFINITY, f64::min);
        worst = worst.max(nearest);
    }
    Ok(worst.sqrt())
}

/// Full report: boundary distances, η and, given a reference set, d_max.
pub fn evaluate<M: Classifier + Sync + ?Sized>(
    model: &M,
    test: &LabeledDataset,
    config: &ProbeConfig,
    reference: Option<&LabeledDataset>,
) -> Result<EvalReport> {
    let mut report = boundary_signed_distances(model, test, config)?;
    if let Some(r) = reference {
        report.d_max = Some(representativeness_dmax(r, test)?);
    }
    Ok(report)
}

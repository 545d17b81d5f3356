//! Learning-curve experiment: nested training sets drawn from the banana
//! generator, a fixed test set, every configured classifier trained on every
//! size and scored by the minimum signed boundary distance.

mod plot;

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use plot::{emit_plot, render_svg};

use crate::classifiers::ClassifierSpec;
use crate::data::{generate_banana_with, nested_training_subsets, BananaParams, LabeledDataset};
use crate::error::{invalid, Error, Result};
use crate::eval::{boundary_signed_distances, ProbeConfig};
use crate::kernel::Kernel;
use crate::rng::RngSeed;

/// Unknown keys are rejected by the flattened classifier settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedClassifier {
    /// Label used in outputs and as the seed role of its training restarts.
    pub name: String,
    #[serde(flatten)]
    pub spec: ClassifierSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub master_seed: RngSeed,
    /// Strictly ascending; smaller training sets are subsets of larger ones.
    pub train_sizes_per_class: Vec<usize>,
    pub test_size_per_class: usize,
    pub repetitions: usize,
    #[serde(default)]
    pub data: BananaParams,
    /// Probing parameters. The probe seed is derived from `master_seed`
    /// per repetition; the `seed` given here is not used.
    #[serde(default)]
    pub probe: ProbeConfig,
    pub classifiers: Vec<NamedClassifier>,
}

impl ExperimentConfig {
    /// Five classifiers, sizes up to 50 per class, 200 test objects per
    /// class, ten repetitions.
    pub fn banana_protocol() -> Self {
        let named = |name: &str, spec: ClassifierSpec| NamedClassifier {
            name: name.into(),
            spec,
        };
        Self {
            master_seed: RngSeed(20_021),
            train_sizes_per_class: vec![2, 5, 10, 15, 20, 30, 40, 50],
            test_size_per_class: 200,
            repetitions: 10,
            data: BananaParams::default(),
            probe: ProbeConfig::default(),
            classifiers: vec![
                named("NCC", ClassifierSpec::Ncc),
                named("Domain Fisher", ClassifierSpec::Fldd),
                named("Decision Tree", ClassifierSpec::PurityTree { max_depth: 16 }),
                named(
                    "NM-SVM linear",
                    ClassifierSpec::NegativeMargin {
                        kernel: Kernel::Linear,
                        restarts: 20,
                    },
                ),
                named(
                    "NM-SVM poly3",
                    ClassifierSpec::NegativeMargin {
                        kernel: Kernel::Poly3,
                        restarts: 20,
                    },
                ),
            ],
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let sizes = &self.train_sizes_per_class;
        if sizes.is_empty() || sizes[0] == 0 || sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("train_sizes_per_class must be positive and strictly ascending"));
        }
        if self.test_size_per_class == 0 || self.repetitions == 0 {
            return Err(invalid("test_size_per_class and repetitions must be positive"));
        }
        if self.classifiers.is_empty() {
            return Err(invalid("no classifiers configured"));
        }
        let mut names: Vec<&str> = self.classifiers.iter().map(|c| c.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("classifier names must be unique"));
        }
        self.probe.validate()
    }
}

/// Aggregate for one classifier at one training size.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveCell {
    pub classifier: String,
    pub train_size: usize,
    /// e_S per repetition; `None` where training or evaluation failed.
    pub values: Vec<Option<f64>>,
    /// Error messages of failed repetitions.
    pub failures: Vec<(usize, String)>,
    /// Repetitions in which some test object had no boundary in reach.
    pub incomplete: usize,
}

impl CurveCell {
    fn completed(&self) -> Vec<f64> {
        self.values.iter().flatten().copied().collect()
    }

    /// Mean over completed repetitions, summed in repetition order.
    pub fn mean(&self) -> Option<f64> {
        let v = self.completed();
        (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
    }

    /// Sample standard deviation over completed repetitions (0 for one).
    pub fn std(&self) -> Option<f64> {
        let v = self.completed();
        let mean = self.mean()?;
        if v.len() < 2 {
            return Some(0.0);
        }
        let ss: f64 = v.iter().map(|x| (x - mean) * (x - mean)).sum();
        Some((ss / (v.len() - 1) as f64).sqrt())
    }

    pub fn is_flagged(&self) -> bool {
        !self.failures.is_empty() || self.incomplete > 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearningCurve {
    pub classifiers: Vec<String>,
    pub sizes: Vec<usize>,
    pub repetitions: usize,
    /// Classifier-major, sizes ascending.
    pub cells: Vec<CurveCell>,
}

impl LearningCurve {
    pub fn cell(&self, classifier: &str, size: usize) -> Option<&CurveCell> {
        self.cells.iter().find(|c| c.classifier == classifier && c.train_size == size)
    }

    /// `(size, mean)` points of one classifier, skipping sizes with no value.
    pub fn series(&self, classifier: &str) -> Vec<(usize, f64)> {
        self.cells
            .iter()
            .filter(|c| c.classifier == classifier)
            .filter_map(|c| c.mean().map(|m| (c.train_size, m)))
            .collect()
    }

    /// `classifier,train_size,mean_e_s,std_e_s,completed,failed,incomplete,
    /// rep_1..rep_R`; failed repetitions are empty fields.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header: Vec<String> = [
            "classifier",
            "train_size",
            "mean_e_s",
            "std_e_s",
            "completed",
            "failed",
            "incomplete",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        header.extend((1..=self.repetitions).map(|r| format!("rep_{r}")));
        w.write_record(&header)?;
        let opt = |v: Option<f64>| v.map_or_else(String::new, |x| x.to_string());
        for c in &self.cells {
            let mut rec = vec![
                c.classifier.clone(),
                c.train_size.to_string(),
                opt(c.mean()),
                opt(c.std()),
                c.completed().len().to_string(),
                c.failures.len().to_string(),
                c.incomplete.to_string(),
            ];
            rec.extend(c.values.iter().map(|v| opt(*v)));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_csv_path(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }
}

/// Runs the whole grid. Cells execute in parallel; every random draw comes
/// from a stream derived from the master seed and the cell's role, so the
/// result is identical across runs and thread counts, and adding a classifier
/// does not disturb the others.
pub fn run_learning_curve(config: &ExperimentConfig) -> Result<LearningCurve> {
    config.validate()?;
    let master = config.master_seed;
    let sizes = &config.train_sizes_per_class;
    let largest = *sizes.last().expect("validated");
    let test = generate_banana_with(config.test_size_per_class, config.data, master.derive("test"))?;
    let subsets: Vec<Vec<LabeledDataset>> = (0..config.repetitions)
        .map(|rep| {
            let pool = generate_banana_with(largest, config.data, master.derive_index("train", rep as u64))?;
            nested_training_subsets(&pool, sizes, master.derive_index("subsets", rep as u64))
        })
        .collect::<Result<_>>()?;

    let jobs: Vec<(usize, usize, usize)> = (0..config.classifiers.len())
        .flat_map(|c| (0..sizes.len()).flat_map(move |s| (0..config.repetitions).map(move |r| (c, s, r))))
        .collect();
    let outcomes: Vec<Result<(f64, bool)>> = jobs
        .par_iter()
        .map(|&(c, s, r)| {
            let named = &config.classifiers[c];
            let seed = master
                .derive(&format!("restarts/{}", named.name))
                .derive_index("cell", (r * sizes.len() + s) as u64);
            let model = named.spec.train(&subsets[r][s], seed)?;
            let probe = ProbeConfig {
                seed: master.derive_index("probe", r as u64),
                ..config.probe
            };
            let report = boundary_signed_distances(&model, &test, &probe)?;
            Ok((report.e_s, report.is_complete()))
        })
        .collect();

    let mut cells: Vec<CurveCell> = Vec::with_capacity(config.classifiers.len() * sizes.len());
    for (&(c, s, r), outcome) in jobs.iter().zip(outcomes) {
        if r == 0 {
            cells.push(CurveCell {
                classifier: config.classifiers[c].name.clone(),
                train_size: sizes[s],
                values: Vec::with_capacity(config.repetitions),
                failures: Vec::new(),
                incomplete: 0,
            });
        }
        let cell = cells.last_mut().expect("pushed at r = 0");
        match outcome {
            Ok((e_s, complete)) => {
                cell.values.push(Some(e_s));
                cell.incomplete += usize::from(!complete);
            }
            Err(e) => {
                cell.values.push(None);
                cell.failures.push((r, e.to_string()));
            }
        }
    }
    Ok(LearningCurve {
        classifiers: config.classifiers.iter().map(|c| c.name.clone()).collect(),
        sizes: sizes.clone(),
        repetitions: config.repetitions,
        cells,
    })
}

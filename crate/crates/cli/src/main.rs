use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use domlearn::classifiers::ClassifierSpec;
use domlearn::data::{generate_banana_with, read_csv_path, write_csv_path, BananaParams};
use domlearn::eval::{evaluate, ProbeConfig};
use domlearn::experiment::{emit_plot, run_learning_curve, ExperimentConfig};
use domlearn::{DecisionModel, RngSeed};

/// Built-in learning-curve protocol, identical to `configs/banana.toml`.
const DEFAULT_CONFIG: &str = include_str!("../configs/banana.toml");

#[derive(Parser)]
#[command(name = "domlearn", version, about = "Domain-based classifiers and boundary-distance evaluation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a two-class banana dataset and write it as CSV.
    Generate(GenerateArgs),
    /// Train a classifier on a CSV dataset and save the model as TOML.
    Train(TrainArgs),
    /// Estimate signed boundary distances of a test set.
    Evaluate(EvaluateArgs),
    /// Run the learning-curve experiment and plot it.
    Curve(CurveArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Objects per class.
    #[arg(long, default_value_t = 50)]
    per_class: usize,
    #[arg(long, default_value_t = BananaParams::default().noise_scale)]
    noise: f64,
    #[arg(long, default_value_t = BananaParams::default().radius)]
    radius: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Args)]
struct TrainArgs {
    /// Training data (`x1,..,xm,label`).
    #[arg(long)]
    data: PathBuf,
    /// One of ncc, fldd, tree, kernel-domain, nmsvm-linear, nmsvm-poly3,
    /// max-error, soft-margin, inequality-linear, inequality-poly3.
    #[arg(long, short)]
    classifier: ClassifierSpec,
    /// Seed for randomized restarts.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    test: PathBuf,
    /// Per-object report CSV.
    #[arg(long, short)]
    out: PathBuf,
    /// Reference set for the representativeness bound d_max.
    #[arg(long)]
    reference: Option<PathBuf>,
    /// Probe settings as TOML; defaults apply to missing keys.
    #[arg(long)]
    probe_config: Option<PathBuf>,
    /// Overrides the probe seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct CurveArgs {
    /// Experiment config; the built-in five-classifier protocol if omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Learning-curve CSV.
    #[arg(long, short, required_unless_present = "print_default_config")]
    out: Option<PathBuf>,
    /// SVG plot; defaults to `<out stem>-plot.svg`. A `.csv` twin of the
    /// plotted points is written next to it.
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Print the built-in config and exit.
    #[arg(long, exclusive = true)]
    print_default_config: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Generate(a) => {
            let params = BananaParams {
                radius: a.radius,
                noise_scale: a.noise,
            };
            let data = generate_banana_with(a.per_class, params, RngSeed(a.seed))?;
            write_csv_path(&data, &a.out).with_context(|| format!("writing {}", a.out.display()))?;
            println!("wrote {} objects to {}", data.len(), a.out.display());
        }
        Command::Train(a) => {
            let data = read_csv_path(&a.data).with_context(|| format!("reading {}", a.data.display()))?;
            let model = a.classifier.train(&data, RngSeed(a.seed))?;
            model.save(&a.out).with_context(|| format!("writing {}", a.out.display()))?;
            println!("trained {} on {} objects, saved to {}", a.classifier, data.len(), a.out.display());
        }
        Command::Evaluate(a) => {
            let model = DecisionModel::load(&a.model).with_context(|| format!("loading {}", a.model.display()))?;
            let test = read_csv_path(&a.test).with_context(|| format!("reading {}", a.test.display()))?;
            let reference = a
                .reference
                .as_ref()
                .map(|p| read_csv_path(p).with_context(|| format!("reading {}", p.display())))
                .transpose()?;
            let mut probe = match &a.probe_config {
                Some(p) => ProbeConfig::load(p).with_context(|| format!("loading {}", p.display()))?,
                None => ProbeConfig::default(),
            };
            if let Some(s) = a.seed {
                probe.seed = RngSeed(s);
            }
            let report = evaluate(&model, &test, &probe, reference.as_ref())?;
            let file = std::fs::File::create(&a.out).with_context(|| format!("writing {}", a.out.display()))?;
            report.write_csv(file)?;
            println!("{}", report.summary_line());
        }
        Command::Curve(a) => {
            if a.print_default_config {
                print!("{DEFAULT_CONFIG}");
                return Ok(());
            }
            let out = a.out.expect("required by clap");
            let config = match &a.config {
                Some(p) => ExperimentConfig::load(p).with_context(|| format!("loading {}", p.display()))?,
                None => ExperimentConfig::from_toml(DEFAULT_CONFIG)?,
            };
            let plot = a.plot.unwrap_or_else(|| {
                let stem = out.file_stem().map_or_else(|| "curve".into(), |s| s.to_string_lossy().into_owned());
                out.with_file_name(format!("{stem}-plot.svg"))
            });
            if plot.with_extension("csv") == out {
                bail!("plot path {} would overwrite the curve CSV with its twin", plot.display());
            }
            let curve = run_learning_curve(&config)?;
            curve.write_csv_path(&out).with_context(|| format!("writing {}", out.display()))?;
            emit_plot(&curve, &plot).with_context(|| format!("writing {}", plot.display()))?;
            for cell in &curve.cells {
                let flag = if cell.is_flagged() { " *" } else { "" };
                match cell.mean() {
                    Some(m) => println!("{:<16} {:>4} {m:>10.4}{flag}", cell.classifier, cell.train_size),
                    None => println!("{:<16} {:>4} {:>10}{flag}", cell.classifier, cell.train_size, "failed"),
                }
            }
            println!("wrote {} and {}", out.display(), plot.display());
        }
    }
    Ok(())
}

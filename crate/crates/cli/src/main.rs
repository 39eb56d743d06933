use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use sparsenb::bernoulli::fit_sparse_bernoulli;
use sparsenb::experiments::{run_gap_experiment, run_pipeline, run_scaling, select_features, Method};
use sparsenb::io::{
    read_svmlight, write_gap_csv, write_indices, write_labels, write_pipeline_csv, write_scaling_csv, FittedModel,
};
use sparsenb::multinomial::{smnb_bound, DEFAULT_TOL};
use sparsenb::{summarize, LabeledDataset};

#[derive(Parser)]
#[command(name = "sparsenb", version, about = "Sparse naive Bayes feature selection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    /// Sparse Bernoulli model on binarized features
    Bnb,
    /// Sparse multinomial model from the convex relaxation
    Smnb,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Smnb,
    Tmnb,
    Odds,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Smnb => Method::Smnb,
            MethodArg::Tmnb => Method::Tmnb,
            MethodArg::Odds => Method::Odds,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Fit a sparse model and write it as JSON
    Fit {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Number of features (default: largest index in the input)
        #[arg(long)]
        dims: Option<usize>,
    },
    /// Write the selected feature indices (0-based, ascending)
    Select {
        #[arg(long, value_enum)]
        method: MethodArg,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        dims: Option<usize>,
    },
    /// Predict +1/-1 labels with a saved model
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Duality-gap curve on synthetic data, as CSV
    GapExperiment {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Select features on the training set, then fit and evaluate a multinomial model
    Pipeline {
        #[arg(long, value_enum)]
        method: MethodArg,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        test: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        dims: Option<usize>,
    },
    /// Time the relaxation on growing synthetic problems
    Scaling {
        #[arg(long)]
        base_m: usize,
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
        factors: Vec<usize>,
        #[arg(long, default_value_t = 0.05)]
        k_ratio: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn load(path: &Path, dims: Option<usize>) -> Result<LabeledDataset> {
    read_svmlight(path, dims).with_context(|| format!("reading {}", path.display()))
}

/// Reads train and test with a shared feature count: `dims` if given,
/// otherwise the larger of the two files' own counts.
fn load_pair(train: &Path, test: &Path, dims: Option<usize>) -> Result<(LabeledDataset, LabeledDataset)> {
    let dims = match dims {
        Some(d) => d,
        None => load(train, None)?.n_features().max(load(test, None)?.n_features()),
    };
    Ok((load(train, Some(dims))?, load(test, Some(dims))?))
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Fit { model, k, gamma, input, out, dims } => {
            let data = load(&input, dims)?;
            let fitted: FittedModel = match model {
                ModelArg::Bnb => fit_sparse_bernoulli(&summarize(&data.binarized())?, k, gamma)?.model.into(),
                ModelArg::Smnb => smnb_bound(&summarize(&data)?, k, gamma, DEFAULT_TOL)?.primal_model.into(),
            };
            fitted.save(&out).with_context(|| format!("writing {}", out.display()))?;
            eprintln!("selected {} of {} features", fitted.selected().len(), fitted.m());
        }
        Command::Select { method, k, gamma, input, out, dims } => {
            let data = load(&input, dims)?;
            let selected = select_features(&data, method.into(), k, gamma)?;
            write_indices(create(&out)?, &selected)?;
        }
        Command::Predict { model, input, out } => {
            let fitted = FittedModel::load(&model).with_context(|| format!("loading {}", model.display()))?;
            let data = load(&input, Some(fitted.m()))?;
            let predicted = fitted.predict(data.x())?;
            write_labels(create(&out)?, &predicted)?;
            eprintln!("accuracy {:.4} on {} records", data.accuracy(&predicted)?, data.len());
        }
        Command::GapExperiment { m, seed, gamma, out } => {
            let curve = run_gap_experiment(m, seed, gamma)?;
            write_gap_csv(create(&out)?, &curve)?;
        }
        Command::Pipeline { method, k, gamma, train, test, out, dims } => {
            let (train, test) = load_pair(&train, &test, dims)?;
            let report = run_pipeline(&train, &test, method.into(), k, gamma)?;
            eprintln!("{} k={} accuracy {:.4}", report.method, report.k, report.stage2_accuracy);
            write_pipeline_csv(create(&out)?, &[report])?;
        }
        Command::Scaling { base_m, factors, k_ratio, seed, out } => {
            let report = run_scaling(base_m, &factors, k_ratio, seed)?;
            write_scaling_csv(create(&out)?, &report)?;
            eprintln!("ratio bound {}", if report.ratio_bound_ok { "ok" } else { "exceeded" });
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
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

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qclass::dataprep::EncodeMode;
use qclass::model::{parse_layers, Pairing};
use qclass::trainer::ShotsMode;

#[derive(Debug, Parser)]
#[command(
    name = "qclass",
    version,
    about = "Fidelity-based quantum classifier on a statevector simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train one learned state per class and write a checkpoint.
    Train(TrainArgs),
    /// Accuracy and confusion counts of a checkpoint on a dataset split.
    Eval(EvalArgs),
    /// Classify one or more raw feature rows.
    Predict(PredictArgs),
    /// Dump learned-state amplitudes and per-qubit marginals as JSON.
    Inspect(InspectArgs),
    /// Write a freshly initialised, untrained checkpoint.
    Init(InitArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DatasetKind {
    Iris,
    Mnist,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Subset {
    Train,
    Test,
    All,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    #[arg(long, value_enum, default_value = "iris")]
    pub dataset: DatasetKind,
    #[arg(long, default_value = "data/iris.csv")]
    pub iris_path: PathBuf,
    #[arg(long, default_value = "data/mnist-10k-images-idx3-ubyte.gz")]
    pub mnist_images: PathBuf,
    #[arg(long, default_value = "data/mnist-10k-labels-idx1-ubyte.gz")]
    pub mnist_labels: PathBuf,
    /// Keep only these labels, relabelled 0.. in the given order (e.g. `3,6`).
    #[arg(long, value_delimiter = ',')]
    pub classes: Option<Vec<usize>>,
    /// Training fraction of each class.
    #[arg(long, default_value_t = 0.8)]
    pub split: f64,
    /// Fixed training samples per class; overrides `--split`.
    #[arg(long)]
    pub train_per_class: Option<usize>,
    /// Fixed test samples per class, used with `--train-per-class`.
    #[arg(long)]
    pub test_per_class: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long)]
    pub pca: Option<usize>,
    /// QC-S, QC-D, QC-E, QC-SD, QC-SDE or a comma list such as `S,D,E,S`.
    #[arg(long, default_value = "QC-S", value_parser = parse_stack)]
    pub stack: String,
    #[arg(long, default_value = "chain")]
    pub pairing: Pairing,
    #[arg(long, default_value = "2per")]
    pub encode: EncodeMode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn parse_stack(s: &str) -> Result<String, String> {
    parse_layers(s)
        .map(|_| s.to_string())
        .map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 0.01)]
    pub lr: f64,
    #[arg(long, default_value_t = 25)]
    pub epochs: usize,
    /// `exact` or a positive shot count.
    #[arg(long, default_value = "exact")]
    pub shots: ShotsMode,
    /// Also train every class model with y=0 on the other classes' samples.
    #[arg(long)]
    pub negative_sampling: bool,
    /// Compute a sample's gradients at fixed parameters, then apply them.
    #[arg(long)]
    pub synchronous: bool,
    /// Threads for synchronous gradients and evaluation.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub metrics_out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[command(flatten)]
    pub data: DataArgs,
    /// Split seed; defaults to the seed stored in the checkpoint.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "test")]
    pub subset: Subset,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// One comma-separated feature row.
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    pub row: Option<String>,
    /// File with one comma-separated feature row per line.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Write the full SWAP-test circuit for class 0 and the first row here.
    #[arg(long)]
    pub dump_circuit: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Report only this state qubit's marginal.
    #[arg(long)]
    pub qubit: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InitArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub out: PathBuf,
}

//! Command-line front end: one subcommand per pipeline stage plus synthetic
//! data generation and the evaluation harness.

mod commands;
mod config;

use std::ffi::OsString;
use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

pub use config::{Paths, PipelineConfig};

#[derive(Debug, Parser)]
#[command(
    name = "riex",
    version,
    about = "Attribute extraction with random-indexing context features"
)]
pub struct Cli {
    /// JSON pipeline config; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for every random choice (context vectors, splits, forests, synthetic data).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count document frequencies over a corpus and freeze them.
    Stats(StatsArgs),
    /// Train a vector store, or extend an unfrozen one with --append.
    Embed(EmbedArgs),
    /// Print the nearest neighbours of a unit by cosine similarity.
    Nn(NnArgs),
    /// Run the registered recognizers and write candidate annotations.
    Recognize(RecognizeArgs),
    /// Write the contextual feature vector of every candidate.
    Featurize(FeaturizeArgs),
    /// Train an extractor for one attribute from labeled candidates.
    Train(TrainArgs),
    /// Label candidates with a trained extractor.
    Predict(PredictArgs),
    /// Run the evaluation protocol.
    Eval(EvalArgs),
    /// Generate a synthetic corpus with gold labels and recognizer files.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Corpus JSON-lines file.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Output statistics file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Document-fraction threshold below which a unit is rare.
    #[arg(long)]
    pub theta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EmbeddingArgs {
    /// Vector dimension.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Fraction of entries set to each sign in a context vector.
    #[arg(long)]
    pub sparsity: Option<f64>,
    /// Window positions before a unit.
    #[arg(long)]
    pub before: Option<usize>,
    /// Window positions after a unit.
    #[arg(long)]
    pub after: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Frozen statistics from `stats`.
    #[arg(long)]
    pub stats: Option<PathBuf>,
    /// Store file to write (and to read with --append).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Extend the existing unfrozen store instead of starting fresh.
    #[arg(long)]
    pub append: bool,
    /// Freeze the store after training.
    #[arg(long)]
    pub freeze: bool,
    #[command(flatten)]
    pub embedding: EmbeddingArgs,
}

#[derive(Debug, Args)]
pub struct NnArgs {
    #[arg(long)]
    pub store: Option<PathBuf>,
    /// Query unit, as it appears after normalization.
    #[arg(long)]
    pub unit: String,
    /// Number of neighbours.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
}

#[derive(Debug, Args)]
pub struct RecognizeArgs {
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Recognizer registry JSON.
    #[arg(long)]
    pub registry: Option<PathBuf>,
    /// Output candidates JSON-lines file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StageArgs {
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long)]
    pub stats: Option<PathBuf>,
    #[arg(long)]
    pub store: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FeaturizeArgs {
    #[command(flatten)]
    pub stage: StageArgs,
    #[arg(long)]
    pub candidates: Option<PathBuf>,
    /// Output JSON-lines file of feature vectors.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Tokens before the span; defaults to the store's window.
    #[arg(long)]
    pub before: Option<usize>,
    /// Tokens after the span; defaults to the store's window.
    #[arg(long)]
    pub after: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub stage: StageArgs,
    /// Labeled candidates JSON-lines file.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[arg(long)]
    pub attribute: Option<String>,
    /// Output model file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Features kept by ANOVA selection.
    #[arg(long)]
    pub k: Option<usize>,
    /// Trees in the forest.
    #[arg(long)]
    pub trees: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[command(flatten)]
    pub stage: StageArgs,
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub candidates: Option<PathBuf>,
    /// Output predictions JSON-lines file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(subcommand)]
    pub mode: EvalMode,
}

#[derive(Debug, Args)]
pub struct TrialArgs {
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[arg(long)]
    pub attribute: Option<String>,
    /// Output CSV of per-trial results.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write a series,x,y CSV for plotting.
    #[arg(long)]
    pub emit_plot_data: Option<PathBuf>,
    /// Number of trials.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Training fraction of each split.
    #[arg(long)]
    pub train_fraction: Option<f64>,
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum EvalMode {
    /// Repeated random splits on one corpus.
    Trials {
        #[command(flatten)]
        stage: StageArgs,
        #[command(flatten)]
        trial: TrialArgs,
    },
    /// Repeat the trials with k-best selection at each k.
    Ksweep {
        #[command(flatten)]
        stage: StageArgs,
        #[command(flatten)]
        trial: TrialArgs,
        /// Comma-separated k values.
        #[arg(long, value_delimiter = ',', default_value = "5,10,20,50,100,200")]
        ks: Vec<usize>,
    },
    /// Retrain statistics and vectors on nested corpora with fixed candidates.
    Drift {
        /// Comma-separated nested corpus files, smallest first. Candidates
        /// must come from the first.
        #[arg(long, value_delimiter = ',', required = true)]
        corpora: Vec<PathBuf>,
        #[command(flatten)]
        trial: TrialArgs,
        #[command(flatten)]
        embedding: EmbeddingArgs,
    },
    /// Time vector training on synthetic token streams.
    Bench {
        /// Comma-separated corpus sizes in tokens.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "500000,1000000,2000000,4000000"
        )]
        sizes: Vec<usize>,
        /// Timed runs per size; the fastest is kept.
        #[arg(long, default_value_t = 1)]
        repeats: usize,
        /// Output CSV of tokens,seconds.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        emit_plot_data: Option<PathBuf>,
        #[command(flatten)]
        embedding: EmbeddingArgs,
    },
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Documents to generate; the high-margin preset defaults to 1000.
    #[arg(long)]
    pub docs: Option<usize>,
    /// JSON generator spec replacing the preset; --docs and --seed still apply when given.
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

/// Parses `args` (program name first) and runs the selected command.
/// Results go to files; summaries go to stdout.
pub fn run<I, T>(args: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::parse_from(args);
    commands::dispatch(cli)
}

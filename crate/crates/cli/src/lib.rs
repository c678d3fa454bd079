//! `trackbench` command-line frontend.

mod evaluate;
mod plot;
mod precomputed;
mod report;
mod score;
mod select;
mod synth;
mod table;

use std::ffi::OsString;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use trackbench::metrics::FrameOptions;
use trackbench::quality::{PassSource, QualityParams};

pub use plot::{write_bar_plot, write_challenge_plot, BarSeries};

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_DATA: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "trackbench",
    version,
    about = "Score, select and evaluate tracking benchmark sequences"
)]
struct Cli {
    /// Worker threads; 0 picks the number of cores.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a seeded synthetic corpus (manifest, ground truth and results tree).
    Synth(synth::SynthArgs),
    /// Compute per-sequence quality reports.
    Score(score::ScoreArgs),
    /// Pick an informative, scenario-balanced subset from a quality report.
    Select(select::SelectArgs),
    /// Evaluate trackers: Table-style statistics, rankings and challenge plots.
    Evaluate(evaluate::EvaluateArgs),
    /// Combine several evaluation files into one table and challenge plot.
    Report(report::ReportArgs),
}

#[derive(Args, Debug, Clone)]
pub(crate) struct CorpusArgs {
    /// Manifest file describing the sequences.
    #[arg(long)]
    manifest: PathBuf,
    /// Results root laid out as <root>/<tracker>/pass<K>/<sequence>.txt.
    #[arg(long)]
    results: PathBuf,
    /// Number of evaluation passes to load.
    #[arg(long, default_value_t = 3)]
    passes: usize,
    /// Drop the initialization frame from every overlap statistic.
    #[arg(long)]
    exclude_init_frame: bool,
}

impl CorpusArgs {
    pub(crate) fn load(&self) -> Result<trackbench::Corpus> {
        let corpus = trackbench::corpus::load_manifest(&self.manifest)
            .with_context(|| format!("loading manifest {}", self.manifest.display()))?;
        let results = trackbench::corpus::load_results(&self.results, &corpus, self.passes)
            .with_context(|| format!("loading results from {}", self.results.display()))?;
        Ok(corpus.with_results(results)?)
    }

    pub(crate) fn frames(&self) -> FrameOptions {
        FrameOptions {
            include_init_frame: !self.exclude_init_frame,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub(crate) struct QualityArgs {
    #[arg(long, default_value_t = QualityParams::default().eta)]
    eta: f64,
    #[arg(long, default_value_t = QualityParams::default().norm_min)]
    norm_min: f64,
    #[arg(long, default_value_t = QualityParams::default().norm_max)]
    norm_max: f64,
    #[arg(long, default_value_t = QualityParams::default().epsilon)]
    epsilon: f64,
    /// Score from pass 1 only, or from the mean over all passes.
    #[arg(long, value_parser = ["first", "mean"], default_value = "first")]
    quality_passes: String,
}

impl QualityArgs {
    pub(crate) fn params(&self) -> QualityParams {
        QualityParams {
            eta: self.eta,
            norm_min: self.norm_min,
            norm_max: self.norm_max,
            epsilon: self.epsilon,
        }
    }

    pub(crate) fn pass_source(&self) -> PassSource {
        match self.quality_passes.as_str() {
            "mean" => PassSource::MeanOverPasses,
            _ => PassSource::FirstPass,
        }
    }
}

/// Run the CLI with the given arguments (program name first) and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_DATA
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .context("building thread pool")?;
    pool.install(|| match cli.command {
        Command::Synth(args) => synth::run(args),
        Command::Score(args) => score::run(args),
        Command::Select(args) => select::run(args),
        Command::Evaluate(args) => evaluate::run(args),
        Command::Report(args) => report::run(args),
    })
}

pub(crate) fn write_file(path: &std::path::Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).with_context(|| format!("creating directory {}", parent.display()))?;
        }
    }
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

pub(crate) fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

use std::path::PathBuf;

use anyhow::Result;
use clap::Args;

use trackbench::metrics::CHALLENGE_STEP;

use crate::evaluate::{load_evaluations, write_dataset_outputs};

#[derive(Args, Debug)]
pub(crate) struct ReportArgs {
    /// evaluation.json files written by `evaluate`; repeat for several datasets.
    #[arg(long = "input", required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = CHALLENGE_STEP)]
    challenge_step: f64,
}

pub(crate) fn run(args: ReportArgs) -> Result<()> {
    let mut evals = Vec::new();
    for path in &args.inputs {
        evals.extend(load_evaluations(path)?);
    }
    write_dataset_outputs(&evals, &args.out, args.challenge_step)
}

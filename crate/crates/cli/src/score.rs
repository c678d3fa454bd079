use std::path::PathBuf;

use anyhow::Result;
use clap::Args;

use trackbench::corpus::{save_quality_report, QualityReportFile};
use trackbench::quality::{score_corpus, ScoreOptions};

use crate::{CorpusArgs, QualityArgs};

#[derive(Args, Debug)]
pub(crate) struct ScoreArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[command(flatten)]
    quality: QualityArgs,
    /// Quality report to write.
    #[arg(long)]
    out: PathBuf,
}

pub(crate) fn run(args: ScoreArgs) -> Result<()> {
    let corpus = args.corpus.load()?;
    let params = args.quality.params();
    let opts = ScoreOptions {
        passes: args.quality.pass_source(),
        frames: args.corpus.frames(),
    };
    let reports = score_corpus(&corpus, &params, &opts)?;
    save_quality_report(&QualityReportFile { params, reports }, &args.out)?;
    println!("scored {} sequences: {}", corpus.len(), args.out.display());
    Ok(())
}

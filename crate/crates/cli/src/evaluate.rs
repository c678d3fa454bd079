use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};

use trackbench::evaluation::{evaluate_corpus, EvalOptions, Evaluation, RankingMetric};
use trackbench::metrics::CHALLENGE_STEP;
use trackbench::selection::ranking_preservation;

use crate::plot::{write_bar_plot, write_challenge_plot, BarSeries};
use crate::precomputed::load_precomputed;
use crate::select::load_selection;
use crate::table::render_table;
use crate::{to_json, write_file, CorpusArgs};

pub(crate) const EVALUATION_VERSION: u32 = 1;

#[derive(Args, Debug)]
pub(crate) struct EvaluateArgs {
    #[arg(long, required_unless_present = "precomputed", conflicts_with = "precomputed")]
    manifest: Option<PathBuf>,
    #[arg(long, required_unless_present = "precomputed", conflicts_with = "precomputed")]
    results: Option<PathBuf>,
    /// CSV of per-(tracker, sequence) mIoU scores used instead of trajectories.
    #[arg(long)]
    precomputed: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    passes: usize,
    #[arg(long)]
    exclude_init_frame: bool,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Selection document; compares tracker rankings on its subset with the full corpus.
    #[arg(long, conflicts_with = "precomputed")]
    subset: Option<PathBuf>,
    #[arg(long, default_value = "miou")]
    ranking_metric: RankingMetric,
    /// Dataset name used in tables and plots (trajectory mode).
    #[arg(long, default_value = "corpus")]
    dataset: String,
    #[arg(long, default_value_t = CHALLENGE_STEP)]
    challenge_step: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub(crate) struct EvaluationDoc {
    pub format_version: u32,
    pub evaluations: Vec<Evaluation>,
}

pub(crate) fn load_evaluations(path: &Path) -> Result<Vec<Evaluation>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc: EvaluationDoc =
        serde_json::from_str(&text).with_context(|| format!("parsing evaluation {}", path.display()))?;
    if doc.format_version != EVALUATION_VERSION {
        bail!(
            "{}: unsupported format_version {} (expected {EVALUATION_VERSION})",
            path.display(),
            doc.format_version
        );
    }
    Ok(doc.evaluations)
}

/// Table, machine-readable evaluation and challenge plot for a set of datasets.
pub(crate) fn write_dataset_outputs(evals: &[Evaluation], out: &Path, challenge_step: f64) -> Result<()> {
    write_file(&out.join("table.csv"), &render_table(evals))?;
    let doc = EvaluationDoc {
        format_version: EVALUATION_VERSION,
        evaluations: evals.to_vec(),
    };
    write_file(&out.join("evaluation.json"), &to_json(&doc))?;
    let curves = evals
        .iter()
        .map(|e| Ok((e.dataset.clone(), e.challenge_curve(challenge_step)?)))
        .collect::<Result<Vec<_>>>()?;
    write_challenge_plot(&curves, out, "challenge")?;
    for e in evals {
        print!("{}: mean mIoU {:.1}", e.dataset, e.mean_miou * 100.0);
        if let Some(n) = e.nstd_miou {
            print!(", NStd {n:.2}");
        }
        println!();
    }
    Ok(())
}

fn ranked_series(name: &str, eval: &Evaluation, metric: RankingMetric, order: &[String]) -> Result<BarSeries> {
    let scores = eval.scores(metric)?;
    Ok(BarSeries {
        name: name.to_string(),
        scores: order
            .iter()
            .filter_map(|t| scores.iter().find(|(n, _)| n == t).cloned())
            .collect(),
    })
}

pub(crate) fn run(args: EvaluateArgs) -> Result<()> {
    let metric = args.ranking_metric;
    let y_label = match metric {
        RankingMetric::Miou => "mIoU",
        RankingMetric::SuccessAuc => "success AUC",
    };

    if let Some(path) = &args.precomputed {
        let evals = load_precomputed(path)?;
        write_dataset_outputs(&evals, &args.out, args.challenge_step)?;
        let order = evals[0].ranking(metric)?;
        let series = evals
            .iter()
            .map(|e| ranked_series(&e.dataset, e, metric, &order))
            .collect::<Result<Vec<_>>>()?;
        write_bar_plot(&series, y_label, &args.out, "ranking")?;
        return Ok(());
    }

    let corpus = CorpusArgs {
        manifest: args.manifest.clone().expect("required by clap"),
        results: args.results.clone().expect("required by clap"),
        passes: args.passes,
        exclude_init_frame: args.exclude_init_frame,
    };
    let opts = EvalOptions {
        passes: Some(args.passes),
        frames: corpus.frames(),
    };
    let corpus = corpus.load()?;
    let eval = evaluate_corpus(args.dataset.clone(), &corpus, &opts)?;
    write_dataset_outputs(std::slice::from_ref(&eval), &args.out, args.challenge_step)?;

    let order = eval.ranking(metric)?;
    let mut series = vec![ranked_series("full", &eval, metric, &order)?];
    if let Some(subset_path) = &args.subset {
        let selection = load_selection(subset_path)?;
        let preservation = ranking_preservation(&corpus, &selection.outcome.selected, metric, &opts)?;
        series.push(BarSeries {
            name: "subset".into(),
            scores: order
                .iter()
                .map(|t| (t.clone(), preservation.scores_subset[t]))
                .collect(),
        });
        write_file(&args.out.join("ranking_preservation.json"), &to_json(&preservation))?;
        println!(
            "ranking preservation ({metric}) on {} selected sequences: tau {:.4}",
            selection.outcome.selected.len(),
            preservation.tau
        );
    }
    write_bar_plot(&series, y_label, &args.out, "ranking")?;
    Ok(())
}

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};

use trackbench::corpus::{load_manifest, load_quality_report};
use trackbench::selection::{select_informative, SelectionConfig, SelectionOutcome};
use trackbench::RankingMetric;

use crate::{to_json, write_file};

pub(crate) const SELECTION_VERSION: u32 = 1;

#[derive(Args, Debug)]
pub(crate) struct SelectArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// Quality report produced by `score`.
    #[arg(long)]
    quality: PathBuf,
    /// Selection document to write.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = SelectionConfig::default().top_fraction)]
    top_fraction: f64,
    #[arg(long, default_value_t = SelectionConfig::default().per_scenario_quota)]
    quota: usize,
    /// Take the top fraction before removing duplicate sub-scenarios.
    #[arg(long)]
    paper_order: bool,
    /// Keep several sequences of the same sub-scenario.
    #[arg(long)]
    no_dedupe: bool,
    /// Metric recorded for later ranking validation.
    #[arg(long, default_value = "miou")]
    ranking_metric: RankingMetric,
}

#[derive(Debug, Serialize, Deserialize)]
pub(crate) struct SelectionDoc {
    pub format_version: u32,
    pub config: SelectionConfig,
    #[serde(flatten)]
    pub outcome: SelectionOutcome,
}

pub(crate) fn load_selection(path: &Path) -> Result<SelectionDoc> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc: SelectionDoc =
        serde_json::from_str(&text).with_context(|| format!("parsing selection {}", path.display()))?;
    if doc.format_version != SELECTION_VERSION {
        bail!(
            "{}: unsupported format_version {} (expected {SELECTION_VERSION})",
            path.display(),
            doc.format_version
        );
    }
    Ok(doc)
}

pub(crate) fn render_counts(outcome: &SelectionOutcome, quota: usize) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<14} {:>8} {:>6} {:>9}",
        "scenario", "selected", "quota", "shortfall"
    )
    .unwrap();
    for (scenario, count) in &outcome.per_scenario_counts {
        let short = outcome
            .unmet_quotas
            .iter()
            .find(|s| s.scenario == *scenario)
            .map_or(0, |s| s.shortfall);
        writeln!(out, "{:<14} {:>8} {:>6} {:>9}", scenario.name(), count, quota, short).unwrap();
    }
    writeln!(
        out,
        "{:<14} {:>8} ({} from the top fraction)",
        "total",
        outcome.selected.len(),
        outcome.top_quality_ids().len()
    )
    .unwrap();
    out
}

pub(crate) fn run(args: SelectArgs) -> Result<()> {
    let corpus = load_manifest(&args.manifest)?;
    let quality = load_quality_report(&args.quality)?;
    let config = SelectionConfig {
        top_fraction: args.top_fraction,
        per_scenario_quota: args.quota,
        dedupe_by_sub_scenario: !args.no_dedupe,
        paper_order: args.paper_order,
        ranking_metric: args.ranking_metric,
    };
    let outcome = select_informative(&quality.reports, &corpus, &config)?;
    print!("{}", render_counts(&outcome, config.per_scenario_quota));
    let doc = SelectionDoc {
        format_version: SELECTION_VERSION,
        config,
        outcome,
    };
    write_file(&args.out, &to_json(&doc))
}

//! Precomputed score tables: per-(tracker, sequence, pass) mIoU without raw trajectories.
//!
//! CSV with a header. `tracker` is required, plus exactly one of `miou` (fraction)
//! or `miou_pct` (percent). Optional columns: `dataset` (default `corpus`),
//! `sequence` (default `all`), `pass` (default 1), `auc` (fraction) and
//! `test_time_min` (minutes spent on that run).

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use trackbench::evaluation::{Evaluation, SequenceScore};

#[derive(Debug, Deserialize)]
struct Row {
    dataset: Option<String>,
    tracker: String,
    sequence: Option<String>,
    pass: Option<usize>,
    miou: Option<f64>,
    miou_pct: Option<f64>,
    auc: Option<f64>,
    test_time_min: Option<f64>,
}

/// One evaluation per dataset, in order of first appearance in the file.
pub(crate) fn load_precomputed(path: &Path) -> Result<Vec<Evaluation>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let mut order: Vec<String> = Vec::new();
    let mut by_dataset: BTreeMap<String, (Vec<SequenceScore>, Option<f64>)> = BTreeMap::new();
    let mut runs: BTreeMap<String, BTreeMap<(String, usize), ()>> = BTreeMap::new();

    for (i, row) in reader.deserialize::<Row>().enumerate() {
        let line = i + 2;
        let row = row.with_context(|| format!("{}:{line}: malformed row", path.display()))?;
        let miou = match (row.miou, row.miou_pct) {
            (Some(v), None) => v,
            (None, Some(p)) => p / 100.0,
            _ => bail!("{}:{line}: need exactly one of miou or miou_pct", path.display()),
        };
        let dataset = row.dataset.unwrap_or_else(|| "corpus".into());
        if !by_dataset.contains_key(&dataset) {
            order.push(dataset.clone());
        }
        let pass = row.pass.unwrap_or(1);
        let entry = by_dataset.entry(dataset.clone()).or_default();
        entry.0.push(SequenceScore {
            tracker: row.tracker.clone(),
            sequence: row.sequence.unwrap_or_else(|| "all".into()),
            pass,
            miou,
            auc: row.auc,
        });
        if let Some(t) = row.test_time_min {
            *entry.1.get_or_insert(0.0) += t;
        }
        runs.entry(dataset).or_default().insert((row.tracker, pass), ());
    }
    if order.is_empty() {
        bail!("{}: no score rows", path.display());
    }

    order
        .into_iter()
        .map(|name| {
            let (scores, total_time) = by_dataset.remove(&name).expect("dataset recorded");
            let mut eval = Evaluation::from_scores(name.clone(), &scores)
                .with_context(|| format!("{}: dataset {name:?}", path.display()))?;
            // time of one full run of one tracker over the dataset
            eval.test_time_min = total_time.map(|t| t / runs[&name].len() as f64);
            Ok(eval)
        })
        .collect()
}

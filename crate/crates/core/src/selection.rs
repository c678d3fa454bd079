//! Informative subset construction and ranking-preservation checks.
//!
//! Selection ranks sequences by quality, optionally keeps only the best
//! sequence of each (scenario, sub-scenario) pair, takes the top fraction of
//! the ranking, and then tops every scenario up to its quota with the next-best
//! sequences of that scenario. A scenario never exceeds its quota.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Scenario};
use crate::error::{Error, Result};
use crate::evaluation::{evaluate_corpus, EvalOptions, RankingMetric};
use crate::quality::QualityReport;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionConfig {
    pub top_fraction: f64,
    pub per_scenario_quota: usize,
    pub dedupe_by_sub_scenario: bool,
    /// Cut the top fraction before deduplicating instead of after.
    pub paper_order: bool,
    pub ranking_metric: RankingMetric,
}

impl Default for SelectionConfig {
    fn default() -> Self {
        Self {
            top_fraction: 0.10,
            per_scenario_quota: 20,
            dedupe_by_sub_scenario: true,
            paper_order: false,
            ranking_metric: RankingMetric::Miou,
        }
    }
}

impl SelectionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.top_fraction > 0.0 && self.top_fraction <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "top_fraction must lie in (0, 1], got {}",
                self.top_fraction
            )));
        }
        if self.per_scenario_quota == 0 {
            return Err(Error::InvalidConfig("per_scenario_quota must be >= 1".into()));
        }
        Ok(())
    }

    /// Number of candidates taken from a ranking of `n` sequences (floored).
    pub fn top_count(&self, n: usize) -> usize {
        // the nudge keeps products like 0.29 * 100 = 28.999.. from losing one
        ((self.top_fraction * n as f64) + 1e-9).floor() as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionReason {
    TopQuality,
    QuotaFill,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub id: String,
    pub reason: SelectionReason,
    #[serde(rename = "Q")]
    pub quality: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Shortfall {
    pub scenario: Scenario,
    pub shortfall: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionOutcome {
    /// Selected ids by descending quality.
    pub selected: Vec<String>,
    pub per_scenario_counts: BTreeMap<Scenario, usize>,
    pub unmet_quotas: Vec<Shortfall>,
    pub provenance: Vec<Provenance>,
}

impl SelectionOutcome {
    /// Ids admitted by the top-fraction stage, by descending quality.
    pub fn top_quality_ids(&self) -> Vec<String> {
        self.provenance
            .iter()
            .filter(|p| p.reason == SelectionReason::TopQuality)
            .map(|p| p.id.clone())
            .collect()
    }
}

/// Ids by descending quality; equal scores fall back to id order.
pub fn rank_by_quality(reports: &[QualityReport]) -> Vec<String> {
    let mut order: Vec<&QualityReport> = reports.iter().collect();
    order.sort_by(|a, b| {
        b.quality
            .total_cmp(&a.quality)
            .then_with(|| a.sequence_id.cmp(&b.sequence_id))
    });
    order.into_iter().map(|r| r.sequence_id.clone()).collect()
}

fn group_key<'a>(corpus: &'a Corpus, id: &str) -> Result<(Scenario, &'a str)> {
    corpus
        .sequence(id)
        .map(|s| (s.scenario, s.sub_scenario.as_str()))
        .ok_or_else(|| Error::UnknownSequence { id: id.to_string() })
}

/// Keep the first occurrence of each (scenario, sub-scenario) pair, preserving order.
pub fn dedupe_sub_scenarios(ordered: &[String], corpus: &Corpus) -> Result<Vec<String>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for id in ordered {
        if seen.insert(group_key(corpus, id)?) {
            out.push(id.clone());
        }
    }
    Ok(out)
}

pub fn select_informative(
    reports: &[QualityReport],
    corpus: &Corpus,
    config: &SelectionConfig,
) -> Result<SelectionOutcome> {
    config.validate()?;
    if corpus.is_empty() || reports.is_empty() {
        return Err(Error::Empty("corpus"));
    }
    let quality: HashMap<&str, f64> = reports.iter().map(|r| (r.sequence_id.as_str(), r.quality)).collect();
    if quality.len() != reports.len() {
        return Err(Error::InvalidConfig("quality reports contain duplicate ids".into()));
    }
    for r in reports {
        if corpus.sequence(&r.sequence_id).is_none() {
            return Err(Error::UnknownSequence {
                id: r.sequence_id.clone(),
            });
        }
    }
    if let Some(missing) = corpus.sequences().iter().find(|s| !quality.contains_key(s.id.as_str())) {
        return Err(Error::InvalidConfig(format!(
            "no quality report for sequence {:?}",
            missing.id
        )));
    }

    let ranked = rank_by_quality(reports);
    let k = config.top_count(corpus.len());
    let candidates = match (config.dedupe_by_sub_scenario, config.paper_order) {
        (false, _) => ranked[..k.min(ranked.len())].to_vec(),
        (true, false) => {
            let pool = dedupe_sub_scenarios(&ranked, corpus)?;
            pool[..k.min(pool.len())].to_vec()
        }
        (true, true) => dedupe_sub_scenarios(&ranked[..k.min(ranked.len())], corpus)?,
    };

    let quota = config.per_scenario_quota;
    let mut counts: BTreeMap<Scenario, usize> = Scenario::ALL.iter().map(|&s| (s, 0)).collect();
    let mut used_groups = BTreeSet::new();
    let mut chosen: HashMap<String, SelectionReason> = HashMap::new();

    for id in &candidates {
        let key = group_key(corpus, id)?;
        let count = counts.get_mut(&key.0).expect("all scenarios present");
        if *count < quota {
            *count += 1;
            used_groups.insert(key);
            chosen.insert(id.clone(), SelectionReason::TopQuality);
        }
    }
    for id in &ranked {
        if chosen.contains_key(id) {
            continue;
        }
        let key = group_key(corpus, id)?;
        if config.dedupe_by_sub_scenario && used_groups.contains(&key) {
            continue;
        }
        let count = counts.get_mut(&key.0).expect("all scenarios present");
        if *count < quota {
            *count += 1;
            used_groups.insert(key);
            chosen.insert(id.clone(), SelectionReason::QuotaFill);
        }
    }

    let selected: Vec<String> = ranked.iter().filter(|id| chosen.contains_key(*id)).cloned().collect();
    let provenance = selected
        .iter()
        .map(|id| Provenance {
            id: id.clone(),
            reason: chosen[id],
            quality: quality[id.as_str()],
        })
        .collect();
    let unmet_quotas = counts
        .iter()
        .filter(|(_, &c)| c < quota)
        .map(|(&scenario, &c)| Shortfall {
            scenario,
            shortfall: quota - c,
        })
        .collect();
    Ok(SelectionOutcome {
        selected,
        per_scenario_counts: counts,
        unmet_quotas,
        provenance,
    })
}

/// Kendall's tau between two rankings of the same ids (no tie correction).
pub fn kendall_tau<S: AsRef<str>>(rank_a: &[S], rank_b: &[S]) -> Result<f64> {
    let n = rank_a.len();
    if n < 2 {
        return Err(Error::InvalidConfig(format!("kendall tau needs >= 2 items, got {n}")));
    }
    let pos_b: HashMap<&str, usize> = rank_b.iter().enumerate().map(|(i, id)| (id.as_ref(), i)).collect();
    if rank_b.len() != n || pos_b.len() != n {
        return Err(Error::RankingMismatch);
    }
    let mapped = rank_a
        .iter()
        .map(|id| pos_b.get(id.as_ref()).copied().ok_or(Error::RankingMismatch))
        .collect::<Result<Vec<usize>>>()?;
    if mapped.iter().collect::<BTreeSet<_>>().len() != n {
        return Err(Error::RankingMismatch);
    }
    let mut balance: i64 = 0;
    for i in 0..n {
        for j in i + 1..n {
            balance += if mapped[i] < mapped[j] { 1 } else { -1 };
        }
    }
    Ok(balance as f64 / (n * (n - 1) / 2) as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingPreservation {
    pub metric: RankingMetric,
    pub tau: f64,
    pub rank_full: Vec<String>,
    pub rank_subset: Vec<String>,
    pub scores_full: BTreeMap<String, f64>,
    pub scores_subset: BTreeMap<String, f64>,
}

/// Rank trackers on the full corpus and on a subset, and compare the rankings.
pub fn ranking_preservation<S: AsRef<str>>(
    corpus: &Corpus,
    subset: &[S],
    metric: RankingMetric,
    opts: &EvalOptions,
) -> Result<RankingPreservation> {
    if subset.is_empty() {
        return Err(Error::Empty("subset"));
    }
    let sub = corpus.subset(subset)?;
    let full_eval = evaluate_corpus("full", corpus, opts)?;
    let sub_eval = evaluate_corpus("subset", &sub, opts)?;
    let rank_full = full_eval.ranking(metric)?;
    let rank_subset = sub_eval.ranking(metric)?;
    Ok(RankingPreservation {
        metric,
        tau: kendall_tau(&rank_full, &rank_subset)?,
        scores_full: full_eval.scores(metric)?.into_iter().collect(),
        scores_subset: sub_eval.scores(metric)?.into_iter().collect(),
        rank_full,
        rank_subset,
    })
}

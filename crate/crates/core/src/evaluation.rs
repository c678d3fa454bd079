//! Multi-pass tracker evaluation over a corpus and tracker rankings.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::metrics::{
    challenge_curve, dataset_mean_miou, iou_matrix, mean, miou, nstd_miou, success_auc, three_pass_aggregate,
    ChallengeCurve, FrameOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankingMetric {
    #[default]
    Miou,
    SuccessAuc,
}

impl fmt::Display for RankingMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RankingMetric::Miou => "miou",
            RankingMetric::SuccessAuc => "success_auc",
        })
    }
}

impl FromStr for RankingMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "miou" => Ok(RankingMetric::Miou),
            "success_auc" | "auc" => Ok(RankingMetric::SuccessAuc),
            _ => Err(Error::InvalidConfig(format!(
                "unknown ranking metric {s:?} (expected miou or success_auc)"
            ))),
        }
    }
}

/// Score of one tracker on one sequence in one pass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceScore {
    pub tracker: String,
    pub sequence: String,
    pub pass: usize,
    pub miou: f64,
    pub auc: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackerSummary {
    pub name: String,
    /// Pass-averaged mean of per-sequence mIoU.
    pub miou: f64,
    pub auc: Option<f64>,
    pub per_pass_miou: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceSummary {
    pub id: String,
    /// Mean over trackers of the pass-averaged mIoU.
    pub mean_miou: f64,
    pub error: f64,
}

/// Per-tracker and per-sequence results of one dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub dataset: String,
    pub trackers: Vec<TrackerSummary>,
    pub sequences: Vec<SequenceSummary>,
    pub mean_miou: f64,
    /// Percentage; absent with fewer than two trackers.
    pub nstd_miou: Option<f64>,
    /// Minutes for one tracker to run the dataset once, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test_time_min: Option<f64>,
}

/// pass -> sequence -> (miou, auc)
type PassTable<'a> = BTreeMap<usize, BTreeMap<&'a str, (f64, Option<f64>)>>;

impl Evaluation {
    /// Aggregate raw scores. Each tracker's per-pass score is the mean over
    /// sequences; passes are then averaged.
    pub fn from_scores(dataset: impl Into<String>, scores: &[SequenceScore]) -> Result<Self> {
        if scores.is_empty() {
            return Err(Error::Empty("sequence scores"));
        }
        let mut table: BTreeMap<&str, PassTable> = BTreeMap::new();
        for s in scores {
            if !(0.0..=1.0).contains(&s.miou) || s.auc.is_some_and(|a| !(0.0..=1.0).contains(&a)) {
                return Err(Error::InvalidConfig(format!(
                    "score for tracker {:?} on {:?} outside [0, 1]",
                    s.tracker, s.sequence
                )));
            }
            if s.pass == 0 {
                return Err(Error::InvalidConfig("pass index must be >= 1".into()));
            }
            let prev = table
                .entry(&s.tracker)
                .or_default()
                .entry(s.pass)
                .or_default()
                .insert(&s.sequence, (s.miou, s.auc));
            if prev.is_some() {
                return Err(Error::InvalidConfig(format!(
                    "duplicate score for tracker {:?}, pass {}, sequence {:?}",
                    s.tracker, s.pass, s.sequence
                )));
            }
        }

        let mut trackers = Vec::with_capacity(table.len());
        // sequence -> per-tracker pass-averaged mIoU
        let mut per_sequence: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
        for (name, passes) in &table {
            let per_pass_miou: Vec<f64> = passes
                .values()
                .map(|seqs| mean(&seqs.values().map(|v| v.0).collect::<Vec<_>>()))
                .collect();
            let auc = passes
                .values()
                .map(|seqs| {
                    seqs.values()
                        .map(|v| v.1)
                        .collect::<Option<Vec<f64>>>()
                        .map(|a| mean(&a))
                })
                .collect::<Option<Vec<f64>>>()
                .map(|per_pass| mean(&per_pass));
            trackers.push(TrackerSummary {
                name: name.to_string(),
                miou: three_pass_aggregate(&per_pass_miou)?,
                auc,
                per_pass_miou,
            });

            let mut seq_scores: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
            for seqs in passes.values() {
                for (id, v) in seqs {
                    seq_scores.entry(id).or_default().push(v.0);
                }
            }
            for (id, vals) in seq_scores {
                per_sequence.entry(id).or_default().push(mean(&vals));
            }
        }

        let sequences = per_sequence
            .into_iter()
            .map(|(id, vals)| {
                let m = mean(&vals);
                SequenceSummary {
                    id: id.to_string(),
                    mean_miou: m,
                    error: (1.0 - m).clamp(0.0, 1.0),
                }
            })
            .collect();
        let mious: Vec<f64> = trackers.iter().map(|t| t.miou).collect();
        let nstd = if mious.len() >= 2 { nstd_miou(&mious).ok() } else { None };
        Ok(Self {
            dataset: dataset.into(),
            mean_miou: dataset_mean_miou(&mious)?,
            nstd_miou: nstd,
            test_time_min: None,
            trackers,
            sequences,
        })
    }

    pub fn tracker(&self, name: &str) -> Option<&TrackerSummary> {
        self.trackers.iter().find(|t| t.name == name)
    }

    /// Tracker scores under a metric, in tracker-name order.
    pub fn scores(&self, metric: RankingMetric) -> Result<Vec<(String, f64)>> {
        self.trackers
            .iter()
            .map(|t| {
                let v = match metric {
                    RankingMetric::Miou => Some(t.miou),
                    RankingMetric::SuccessAuc => t.auc,
                };
                v.map(|v| (t.name.clone(), v))
                    .ok_or_else(|| Error::InvalidConfig(format!("tracker {:?} has no success AUC scores", t.name)))
            })
            .collect()
    }

    /// Tracker names by descending score; exact ties fall back to name order.
    pub fn ranking(&self, metric: RankingMetric) -> Result<Vec<String>> {
        Ok(rank_descending(self.scores(metric)?))
    }

    pub fn challenge_curve(&self, step: f64) -> Result<ChallengeCurve> {
        let errors: Vec<f64> = self.sequences.iter().map(|s| s.error).collect();
        challenge_curve(&errors, step)
    }
}

pub(crate) fn rank_descending(mut scored: Vec<(String, f64)>) -> Vec<String> {
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    scored.into_iter().map(|(n, _)| n).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EvalOptions {
    /// Use passes `1..=passes`; `None` uses every pass present.
    pub passes: Option<usize>,
    pub frames: FrameOptions,
}

/// Per-(tracker, sequence, pass) mIoU and success AUC for a corpus with results.
pub fn sequence_scores(corpus: &Corpus, opts: &EvalOptions) -> Result<Vec<SequenceScore>> {
    let trackers = corpus.trackers();
    if trackers.is_empty() {
        return Err(Error::Empty("tracker results"));
    }
    let jobs: Vec<(&str, usize)> = trackers
        .iter()
        .flat_map(|t| {
            corpus
                .passes(t)
                .into_iter()
                .filter(|&p| opts.passes.is_none_or(|limit| p <= limit))
                .map(move |p| (t.as_str(), p))
        })
        .collect();

    let per_sequence = corpus
        .sequences()
        .par_iter()
        .map(|seq| {
            jobs.iter()
                .map(|&(t, p)| {
                    let traj = corpus.prediction(t, p, &seq.id).ok_or_else(|| Error::MissingResult {
                        tracker: t.to_string(),
                        pass: p,
                        sequence: seq.id.clone(),
                        path: Default::default(),
                    })?;
                    let s = iou_matrix(seq, &[(t, traj)], opts.frames).map_err(|e| e.in_sequence(&seq.id))?;
                    Ok(SequenceScore {
                        tracker: t.to_string(),
                        sequence: seq.id.clone(),
                        pass: p,
                        miou: miou(&s, 0),
                        auc: Some(success_auc(s.row(0))),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_sequence.into_iter().flatten().collect())
}

pub fn evaluate_corpus(dataset: impl Into<String>, corpus: &Corpus, opts: &EvalOptions) -> Result<Evaluation> {
    if corpus.is_empty() {
        return Err(Error::Empty("corpus"));
    }
    Evaluation::from_scores(dataset, &sequence_scores(corpus, opts)?)
}

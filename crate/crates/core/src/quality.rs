//! Sequence quality: challenge degree, discriminative ability, variation density
//! and their product.
//!
//! Challenge and discrimination depend on one sequence only. Variation density
//! min-max normalizes over the whole corpus, so [`score_corpus`] computes the
//! per-sequence terms in parallel and then joins them before the division.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::metrics::{iou_matrix, mean, population_std, FrameOptions, IoUMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QualityParams {
    /// Scale applied to the std of per-tracker mean IoUs before exponentiation.
    pub eta: f64,
    /// Lower end of the min-max normalization range.
    pub norm_min: f64,
    /// Upper end of the min-max normalization range.
    pub norm_max: f64,
    /// Floor for the accumulated variation before taking its log.
    pub epsilon: f64,
}

impl Default for QualityParams {
    fn default() -> Self {
        Self {
            eta: 5.0,
            norm_min: 0.1,
            norm_max: 1.0,
            epsilon: 1e-6,
        }
    }
}

impl QualityParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.eta, self.norm_min, self.norm_max, self.epsilon]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidConfig("quality parameters must be finite".into()));
        }
        if self.eta <= 0.0 {
            return Err(Error::InvalidConfig(format!("eta must be > 0, got {}", self.eta)));
        }
        if !(0.0 < self.norm_min && self.norm_min < self.norm_max) {
            return Err(Error::InvalidConfig(format!(
                "normalization range must satisfy 0 < norm_min < norm_max, got [{}, {}]",
                self.norm_min, self.norm_max
            )));
        }
        if self.epsilon <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "epsilon must be > 0, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QualityReport {
    #[serde(rename = "id")]
    pub sequence_id: String,
    #[serde(rename = "C")]
    pub challenge: f64,
    #[serde(rename = "D")]
    pub discrimination: f64,
    #[serde(rename = "V_raw")]
    pub variation_raw: f64,
    #[serde(rename = "V")]
    pub variation: f64,
    #[serde(rename = "Q")]
    pub quality: f64,
}

/// One minus the grand mean of all overlap scores.
pub fn challenge_degree(s: &IoUMatrix) -> f64 {
    1.0 - mean(s.values())
}

/// `exp(eta * sigma)` where sigma is the population std of the per-tracker mean IoUs.
pub fn discriminative_ability(s: &IoUMatrix, eta: f64) -> Result<f64> {
    if s.trackers() < 2 {
        return Err(Error::TooFewTrackers { found: s.trackers() });
    }
    let row_means: Vec<f64> = s.rows().map(mean).collect();
    Ok((eta * population_std(&row_means)).exp())
}

/// Natural log of the summed absolute frame-to-frame IoU changes, floored at `epsilon`.
pub fn variation_mass(s: &IoUMatrix, epsilon: f64) -> f64 {
    let total: f64 = s
        .rows()
        .map(|row| row.windows(2).map(|w| (w[1] - w[0]).abs()).sum::<f64>())
        .sum();
    total.max(epsilon).ln()
}

/// Min-max map into `[a, b]`; a population without spread maps entirely to `b`.
pub fn min_max_normalize(values: &[f64], a: f64, b: f64) -> Vec<f64> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi <= lo {
        return vec![b; values.len()];
    }
    values.iter().map(|v| a + (v - lo) * (b - a) / (hi - lo)).collect()
}

/// Normalized variation mass divided by normalized log sequence length.
pub fn variation_density(variation_raw: &[f64], frame_counts: &[usize], params: &QualityParams) -> Result<Vec<f64>> {
    if variation_raw.len() != frame_counts.len() {
        return Err(Error::InvalidConfig(format!(
            "{} variation values for {} frame counts",
            variation_raw.len(),
            frame_counts.len()
        )));
    }
    if frame_counts.contains(&0) {
        return Err(Error::InvalidConfig("frame counts must be positive".into()));
    }
    let log_lengths: Vec<f64> = frame_counts.iter().map(|&m| (m as f64).ln()).collect();
    let num = min_max_normalize(variation_raw, params.norm_min, params.norm_max);
    let den = min_max_normalize(&log_lengths, params.norm_min, params.norm_max);
    Ok(num.iter().zip(&den).map(|(n, d)| n / d).collect())
}

pub fn quality_score(challenge: f64, discrimination: f64, variation: f64) -> f64 {
    challenge * discrimination * variation
}

/// Which passes feed the overlap matrix used for scoring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PassSource {
    #[default]
    FirstPass,
    /// Element-wise mean over every pass each tracker provides.
    MeanOverPasses,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ScoreOptions {
    pub passes: PassSource,
    pub frames: FrameOptions,
}

/// Build the overlap matrix of a sequence from the corpus's result sets.
pub fn sequence_matrix(
    corpus: &Corpus,
    sequence_id: &str,
    source: PassSource,
    frames: FrameOptions,
) -> Result<IoUMatrix> {
    let seq = corpus.sequence(sequence_id).ok_or_else(|| Error::UnknownSequence {
        id: sequence_id.to_string(),
    })?;
    let trackers = corpus.trackers();
    let matrix_for_pass = |pass: usize| -> Result<IoUMatrix> {
        let preds = trackers
            .iter()
            .map(|t| {
                corpus
                    .prediction(t, pass, &seq.id)
                    .map(|traj| (t.as_str(), traj))
                    .ok_or_else(|| Error::MissingResult {
                        tracker: t.clone(),
                        pass,
                        sequence: seq.id.clone(),
                        path: Default::default(),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        iou_matrix(seq, &preds, frames)
    };
    match source {
        PassSource::FirstPass => matrix_for_pass(1),
        PassSource::MeanOverPasses => {
            // Each tracker contributes the mean of its own passes.
            let per_tracker = trackers
                .iter()
                .map(|t| {
                    let mats = corpus
                        .passes(t)
                        .into_iter()
                        .map(|p| {
                            let traj = corpus.prediction(t, p, &seq.id).ok_or_else(|| Error::MissingResult {
                                tracker: t.clone(),
                                pass: p,
                                sequence: seq.id.clone(),
                                path: Default::default(),
                            })?;
                            iou_matrix(seq, &[(t.as_str(), traj)], frames)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    IoUMatrix::mean_of(&mats)
                })
                .collect::<Result<Vec<_>>>()?;
            let rows = per_tracker.iter().map(|m| m.row(0).to_vec()).collect();
            IoUMatrix::from_rows(seq.id.clone(), trackers.clone(), rows)
        }
    }
}

/// Quality reports for every corpus sequence, in id order.
pub fn score_corpus(corpus: &Corpus, params: &QualityParams, opts: &ScoreOptions) -> Result<Vec<QualityReport>> {
    params.validate()?;
    if corpus.is_empty() {
        return Err(Error::Empty("corpus"));
    }
    let trackers = corpus.trackers();
    if trackers.len() < 2 {
        return Err(Error::TooFewTrackers { found: trackers.len() });
    }

    let partial = corpus
        .sequences()
        .par_iter()
        .map(|seq| {
            let s = sequence_matrix(corpus, &seq.id, opts.passes, opts.frames).map_err(|e| e.in_sequence(&seq.id))?;
            let c = challenge_degree(&s);
            let d = discriminative_ability(&s, params.eta).map_err(|e| e.in_sequence(&seq.id))?;
            Ok((c, d, variation_mass(&s, params.epsilon)))
        })
        .collect::<Result<Vec<_>>>()?;

    let v_raw: Vec<f64> = partial.iter().map(|p| p.2).collect();
    let lengths: Vec<usize> = corpus.sequences().iter().map(|s| s.frame_count()).collect();
    let v = variation_density(&v_raw, &lengths, params)?;

    Ok(corpus
        .sequences()
        .iter()
        .zip(partial)
        .zip(v)
        .map(|((seq, (c, d, v_raw)), v)| QualityReport {
            sequence_id: seq.id.clone(),
            challenge: c,
            discrimination: d,
            variation_raw: v_raw,
            variation: v,
            quality: quality_score(c, d, v),
        })
        .collect())
}

//! Overlap matrices and the tracking metrics built on them.
//!
//! Scores are fractions in `[0, 1]`; only the normalized std is a percentage.

use serde::{Deserialize, Serialize};

use crate::corpus::SequenceRecord;
use crate::error::{Error, Result};
use crate::geometry::{frame_iou, Trajectory};

/// Which frames of a sequence enter the overlap matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameOptions {
    /// Keep the initialization frame (frame 1).
    pub include_init_frame: bool,
}

impl Default for FrameOptions {
    fn default() -> Self {
        Self {
            include_init_frame: true,
        }
    }
}

/// Per-frame overlap of N trackers on one sequence, row-major.
///
/// Columns are the evaluable frames only: frames with absent ground truth are
/// dropped for every tracker.
#[derive(Debug, Clone, PartialEq)]
pub struct IoUMatrix {
    sequence_id: String,
    tracker_ids: Vec<String>,
    frames: usize,
    values: Vec<f64>,
}

impl IoUMatrix {
    /// Build from explicit rows; rows must be non-empty, equally long and within `[0, 1]`.
    pub fn from_rows(sequence_id: impl Into<String>, tracker_ids: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() || rows.len() != tracker_ids.len() {
            return Err(Error::InvalidConfig(format!(
                "{} rows for {} tracker ids",
                rows.len(),
                tracker_ids.len()
            )));
        }
        let frames = rows[0].len();
        if frames == 0 {
            return Err(Error::NoEvaluableFrames);
        }
        if rows.iter().any(|r| r.len() != frames) {
            return Err(Error::InvalidConfig("ragged IoU rows".into()));
        }
        let values: Vec<f64> = rows.into_iter().flatten().collect();
        if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::InvalidConfig("IoU values must lie in [0, 1]".into()));
        }
        Ok(Self {
            sequence_id: sequence_id.into(),
            tracker_ids,
            frames,
            values,
        })
    }

    pub fn sequence_id(&self) -> &str {
        &self.sequence_id
    }

    pub fn tracker_ids(&self) -> &[String] {
        &self.tracker_ids
    }

    pub fn trackers(&self) -> usize {
        self.tracker_ids.len()
    }

    /// Number of evaluable frames.
    pub fn frames(&self) -> usize {
        self.frames
    }

    pub fn row(&self, tracker: usize) -> &[f64] {
        &self.values[tracker * self.frames..(tracker + 1) * self.frames]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.frames)
    }

    pub fn get(&self, tracker: usize, frame: usize) -> f64 {
        self.row(tracker)[frame]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Element-wise mean of matrices over the same trackers and frames.
    pub fn mean_of(matrices: &[IoUMatrix]) -> Result<IoUMatrix> {
        let first = matrices.first().ok_or(Error::Empty("IoU matrices"))?;
        if matrices
            .iter()
            .any(|m| m.tracker_ids != first.tracker_ids || m.frames != first.frames)
        {
            return Err(Error::InvalidConfig("IoU matrices disagree on shape".into()));
        }
        let n = matrices.len() as f64;
        let values = (0..first.values.len())
            .map(|k| matrices.iter().map(|m| m.values[k]).sum::<f64>() / n)
            .collect();
        Ok(IoUMatrix {
            values,
            ..first.clone()
        })
    }
}

/// Overlap matrix of several trackers' predictions against a sequence's ground truth.
///
/// Rows follow tracker names in lexicographic order regardless of input order.
pub fn iou_matrix(seq: &SequenceRecord, predictions: &[(&str, &Trajectory)], opts: FrameOptions) -> Result<IoUMatrix> {
    if predictions.is_empty() {
        return Err(Error::Empty("tracker predictions"));
    }
    let mut preds: Vec<(&str, &Trajectory)> = predictions.to_vec();
    preds.sort_by(|a, b| a.0.cmp(b.0));
    for (name, traj) in &preds {
        if traj.len() != seq.frame_count() {
            return Err(Error::LengthMismatch {
                tracker: name.to_string(),
                pass: 0,
                sequence: seq.id.clone(),
                expected: seq.frame_count(),
                actual: traj.len(),
            });
        }
    }
    let start = usize::from(!opts.include_init_frame);
    let kept: Vec<usize> = (start..seq.frame_count())
        .filter(|&j| seq.gt.frames()[j].is_some())
        .collect();
    if kept.is_empty() {
        return Err(Error::NoEvaluableFrames);
    }
    let mut values = Vec::with_capacity(preds.len() * kept.len());
    for (_, traj) in &preds {
        values.extend(
            kept.iter()
                .map(|&j| frame_iou(&seq.gt.frames()[j], &traj.frames()[j]).expect("kept frames have ground truth")),
        );
    }
    Ok(IoUMatrix {
        sequence_id: seq.id.clone(),
        tracker_ids: preds.iter().map(|(n, _)| n.to_string()).collect(),
        frames: kept.len(),
        values,
    })
}

pub(crate) fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Divide-by-N standard deviation; exactly 0 when all values are equal.
pub fn population_std(values: &[f64]) -> f64 {
    if values.windows(2).all(|w| w[0] == w[1]) {
        return 0.0;
    }
    let m = mean(values);
    (values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / values.len() as f64).sqrt()
}

/// Mean IoU of one tracker (row) over the evaluable frames.
pub fn miou(s: &IoUMatrix, tracker: usize) -> f64 {
    mean(s.row(tracker))
}

/// Mean of per-tracker mIoU values on one dataset.
pub fn dataset_mean_miou(mious: &[f64]) -> Result<f64> {
    if mious.is_empty() {
        return Err(Error::Empty("per-tracker mIoU list"));
    }
    Ok(mean(mious))
}

/// Population std of per-tracker mIoUs divided by their mean, as a percentage.
pub fn nstd_miou(mious: &[f64]) -> Result<f64> {
    if mious.len() < 2 {
        return Err(Error::InvalidConfig(format!(
            "normalized std needs >= 2 trackers, got {}",
            mious.len()
        )));
    }
    let m = mean(mious);
    if m == 0.0 {
        return Err(Error::UndefinedNormalizedStd);
    }
    Ok(100.0 * population_std(mious) / m)
}

pub const SUCCESS_STEP: f64 = 0.05;

fn threshold_count(step: f64) -> Result<usize> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::InvalidConfig(format!("threshold step {step} outside (0, 1]")));
    }
    let n = (1.0 / step).round();
    if (n * step - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidConfig(format!("threshold step {step} does not divide 1")));
    }
    Ok(n as usize)
}

/// Thresholds `0, step, ..., 1` computed as `k / n` so that grid points are exact.
pub fn thresholds(step: f64) -> Result<Vec<f64>> {
    let n = threshold_count(step)?;
    Ok((0..=n).map(|k| k as f64 / n as f64).collect())
}

/// Success-plot AUC with the 21-point OTB threshold grid.
pub fn success_auc(row: &[f64]) -> f64 {
    success_auc_with_step(row, SUCCESS_STEP).expect("default step is valid")
}

/// Mean over thresholds of the fraction of frames with IoU strictly above the threshold.
pub fn success_auc_with_step(row: &[f64], step: f64) -> Result<f64> {
    if row.is_empty() {
        return Err(Error::Empty("IoU row"));
    }
    let ts = thresholds(step)?;
    let total: usize = ts.iter().map(|&t| row.iter().filter(|&&v| v > t).count()).sum();
    Ok(total as f64 / (ts.len() * row.len()) as f64)
}

/// Fraction of sequences whose mean mIoU error exceeds each threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChallengeCurve {
    pub thresholds: Vec<f64>,
    pub fractions: Vec<f64>,
    pub auc: f64,
}

pub const CHALLENGE_STEP: f64 = 0.01;

/// Challenge plot over per-sequence errors (`1 - mIoU`), with trapezoid-rule AUC.
pub fn challenge_curve(errors: &[f64], step: f64) -> Result<ChallengeCurve> {
    if errors.is_empty() {
        return Err(Error::Empty("sequence errors"));
    }
    if errors.iter().any(|e| !(0.0..=1.0).contains(e)) {
        return Err(Error::InvalidConfig("sequence errors must lie in [0, 1]".into()));
    }
    let ts = thresholds(step)?;
    let mut sorted = errors.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let fractions: Vec<f64> = ts
        .iter()
        .map(|&t| {
            let at_or_below = sorted.partition_point(|&e| e <= t);
            (sorted.len() - at_or_below) as f64 / n
        })
        .collect();
    let h = 1.0 / (ts.len() - 1) as f64;
    let auc = fractions.windows(2).map(|w| 0.5 * (w[0] + w[1]) * h).sum::<f64>();
    Ok(ChallengeCurve {
        thresholds: ts,
        fractions,
        auc,
    })
}

/// Mean of a tracker's scores over repeated evaluation passes.
pub fn three_pass_aggregate(per_pass: &[f64]) -> Result<f64> {
    if per_pass.is_empty() {
        return Err(Error::Empty("per-pass scores"));
    }
    Ok(mean(per_pass))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Scenario;
    use crate::geometry::BoundingBox;
    use proptest::prelude::*;

    fn seq(gt: Vec<Option<BoundingBox>>) -> SequenceRecord {
        SequenceRecord {
            id: "s".into(),
            scenario: Scenario::Animal,
            sub_scenario: "x".into(),
            source_dataset: "t".into(),
            gt: Trajectory::new(gt),
        }
    }

    fn b(x: f64, y: f64, w: f64, h: f64) -> BoundingBox {
        BoundingBox::new(x, y, w, h)
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn matrix_of_perfect_predictions_is_ones() {
        let s = seq(vec![Some(b(0., 0., 3., 3.)), Some(b(5., 5., 2., 7.))]);
        let m = iou_matrix(&s, &[("a", &s.gt), ("b", &s.gt)], FrameOptions::default()).unwrap();
        assert!(m.values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn absent_tracker_row_is_zero() {
        let s = seq(vec![Some(b(0., 0., 3., 3.)), Some(b(5., 5., 2., 7.))]);
        let none = Trajectory::new(vec![None, None]);
        let m = iou_matrix(&s, &[("z", &none), ("a", &s.gt)], FrameOptions::default()).unwrap();
        assert_eq!(m.tracker_ids(), ["a", "z"]);
        assert_eq!(m.row(1), [0.0, 0.0]);
    }

    #[test]
    fn single_tracker_partial_overlap() {
        let s = seq(vec![Some(b(0., 0., 2., 2.)), Some(b(0., 0., 2., 2.))]);
        let p = Trajectory::from_boxes([b(0., 0., 2., 2.), b(1., 1., 2., 2.)]);
        let m = iou_matrix(&s, &[("t", &p)], FrameOptions::default()).unwrap();
        assert_eq!(m.row(0)[0], 1.0);
        assert!(close(m.row(0)[1], 1.0 / 7.0, 1e-15));
        assert!(close(miou(&m, 0), 4.0 / 7.0, 1e-15));
    }

    #[test]
    fn absent_ground_truth_and_init_frame() {
        let s = seq(vec![Some(b(0., 0., 2., 2.)), None, Some(b(0., 0., 2., 2.))]);
        let p = Trajectory::new(vec![None, Some(b(0., 0., 2., 2.)), Some(b(0., 0., 2., 2.))]);
        let m = iou_matrix(&s, &[("t", &p)], FrameOptions::default()).unwrap();
        assert_eq!(m.row(0), [0.0, 1.0]);
        let m = iou_matrix(
            &s,
            &[("t", &p)],
            FrameOptions {
                include_init_frame: false,
            },
        )
        .unwrap();
        assert_eq!(m.row(0), [1.0]);
    }

    #[test]
    fn no_evaluable_frames() {
        let s = seq(vec![None, None]);
        let p = Trajectory::new(vec![None, None]);
        let err = iou_matrix(&s, &[("t", &p)], FrameOptions::default()).unwrap_err();
        assert_eq!(err.to_string(), "sequence has no evaluable frames");
    }

    #[test]
    fn miou_examples() {
        let m = IoUMatrix::from_rows("s", vec!["a".into(), "b".into()], vec![vec![1.0, 1.0], vec![0.5, 0.7]]).unwrap();
        assert_eq!(miou(&m, 0), 1.0);
        assert!(close(miou(&m, 1), 0.6, 1e-15));
    }

    #[test]
    fn dataset_mean_examples() {
        let itb = [44.1, 47.7, 44.9, 47.2, 53.7, 54.4, 52.0, 56.1, 54.7, 57.6];
        assert!(close(dataset_mean_miou(&itb).unwrap(), 51.24, 1e-9));
        let otb = [66.6, 65.6, 65.3, 65.6, 67.4, 68.7, 69.4, 69.7, 67.0, 69.0];
        assert!(close(dataset_mean_miou(&otb).unwrap(), 67.43, 1e-9));
        assert_eq!(dataset_mean_miou(&[0.37]).unwrap(), 0.37);
        assert!(dataset_mean_miou(&[]).is_err());
    }

    #[test]
    fn nstd_examples() {
        assert_eq!(nstd_miou(&[0.4, 0.4, 0.4]).unwrap(), 0.0);
        assert!(close(nstd_miou(&[40.0, 60.0]).unwrap(), 20.0, 1e-12));
        // population std of the OTB100 row, computed independently: 2.3552010777...
        let otb = [66.6, 65.6, 65.3, 65.6, 67.4, 68.7, 69.4, 69.7, 67.0, 69.0];
        assert!(close(nstd_miou(&otb).unwrap(), 2.3552010777463, 1e-9));
        assert!(matches!(
            nstd_miou(&[0.0, 0.0]).unwrap_err(),
            Error::UndefinedNormalizedStd
        ));
    }

    /// Brute force: enumerate the 21 thresholds explicitly.
    fn success_oracle(row: &[f64]) -> f64 {
        let mut hits = 0usize;
        for k in 0..=20 {
            let t = k as f64 / 20.0;
            for &v in row {
                if v > t {
                    hits += 1;
                }
            }
        }
        hits as f64 / (21 * row.len()) as f64
    }

    #[test]
    fn success_auc_examples() {
        assert_eq!(success_auc(&[0.0, 0.0, 0.0]), 0.0);
        assert!(close(success_auc(&[1.0, 1.0]), 20.0 / 21.0, 1e-15));
        // 0.6 exceeds the 12 thresholds 0, 0.05, ..., 0.55 (not 0.6 itself).
        assert_eq!(success_oracle(&[0.6]), 12.0 / 21.0);
        assert!(close(success_auc(&[0.6]), 12.0 / 21.0, 1e-15));
    }

    #[test]
    fn challenge_curve_examples() {
        let c = challenge_curve(&[0.0, 0.0, 0.0], 0.1).unwrap();
        assert!(c.fractions.iter().all(|&f| f == 0.0));
        assert_eq!(c.auc, 0.0);

        let c = challenge_curve(&[1.0], 0.1).unwrap();
        assert_eq!(c.fractions.len(), 11);
        assert!(c.fractions[..10].iter().all(|&f| f == 1.0));
        assert_eq!(c.fractions[10], 0.0);

        let c = challenge_curve(&[0.2, 0.8], 0.1).unwrap();
        assert_eq!(c.fractions, vec![1.0, 1.0, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.0, 0.0, 0.0]);
        // trapezoid by hand: 0.1 * (0.5*1 + (1 + 6*0.5 + 0 + 0) + 0.5*0) = 0.45
        assert!(close(c.auc, 0.45, 1e-12));

        assert!(challenge_curve(&[], 0.1).is_err());
        assert!(challenge_curve(&[0.5], 0.3).is_err());
    }

    #[test]
    fn pass_aggregation() {
        assert_eq!(three_pass_aggregate(&[0.5, 0.5, 0.5]).unwrap(), 0.5);
        assert!(close(three_pass_aggregate(&[0.5, 0.6, 0.7]).unwrap(), 0.6, 1e-15));
        assert_eq!(three_pass_aggregate(&[0.42]).unwrap(), 0.42);
    }

    proptest! {
        #[test]
        fn success_auc_matches_enumeration(row in proptest::collection::vec(0.0..=1.0f64, 1..50)) {
            prop_assert!(close(success_auc(&row), success_oracle(&row), 1e-12));
        }

        #[test]
        fn success_auc_monotone(row in proptest::collection::vec(0.0..=1.0f64, 1..30), idx in 0usize..30, bump in 0.0..1.0f64) {
            let i = idx % row.len();
            let mut raised = row.clone();
            raised[i] = (raised[i] + bump).min(1.0);
            prop_assert!(success_auc(&raised) >= success_auc(&row));
        }

        #[test]
        fn permutation_invariance(mut row in proptest::collection::vec(0.0..=1.0f64, 2..30)) {
            let before = (mean(&row), nstd_miou(&row).ok());
            row.reverse();
            prop_assert!(close(before.0, mean(&row), 1e-12));
            if let (Some(a), Ok(b)) = (before.1, nstd_miou(&row)) {
                prop_assert!(close(a, b, 1e-9));
            }
        }

        #[test]
        fn challenge_fractions_non_increasing(errors in proptest::collection::vec(0.0..=1.0f64, 1..40)) {
            let c = challenge_curve(&errors, 0.01).unwrap();
            prop_assert!(c.fractions.windows(2).all(|w| w[1] <= w[0]));
            prop_assert!((0.0..=1.0).contains(&c.auc));
        }

        #[test]
        fn identical_passes(v in 0.0..=1.0f64, n in 1usize..6) {
            prop_assert!(close(three_pass_aggregate(&vec![v; n]).unwrap(), v, 1e-15));
        }
    }
}

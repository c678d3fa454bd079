//! Quality scoring, informative subset selection and evaluation for
//! single-object tracking benchmarks.
//!
//! A [`Corpus`] holds sequences with ground truth and the per-pass output of
//! several trackers. [`quality::score_corpus`] rates every sequence by how
//! challenging, discriminative and variation-dense it is;
//! [`selection::select_informative`] picks a small scenario-balanced subset from
//! those ratings; [`evaluation`] and [`selection::ranking_preservation`] check
//! that trackers rank the same way on the subset as on the whole corpus.

pub mod corpus;
pub mod error;
pub mod evaluation;
pub mod geometry;
pub mod metrics;
pub mod quality;
pub mod selection;
pub mod synth;

pub use corpus::{Corpus, ResultSet, Scenario, SequenceRecord};
pub use error::{Error, Result};
pub use evaluation::{evaluate_corpus, EvalOptions, Evaluation, RankingMetric, SequenceScore};
pub use geometry::{frame_iou, iou, BoundingBox, Frame, Trajectory};
pub use metrics::{ChallengeCurve, FrameOptions, IoUMatrix};
pub use quality::{score_corpus, PassSource, QualityParams, QualityReport, ScoreOptions};
pub use selection::{kendall_tau, ranking_preservation, select_informative, SelectionConfig, SelectionOutcome};
pub use synth::{generate, SynthSpec};

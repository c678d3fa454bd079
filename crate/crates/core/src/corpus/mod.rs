//! Sequence metadata, scenario taxonomy, tracker result sets and their on-disk formats.

mod annotation;
mod manifest;
mod report;
mod results;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::Trajectory;

pub use annotation::{parse_trajectory, read_trajectory, render_trajectory, write_trajectory};
pub use manifest::{load_manifest, save_manifest, ManifestEntry, MANIFEST_VERSION};
pub use report::{load_quality_report, render_quality_report, save_quality_report, QualityReportFile, REPORT_VERSION};
pub use results::{load_results, result_path, write_results};

/// Target-and-context category of a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scenario {
    HumanBody,
    HumanPart,
    Animal,
    Vehicle,
    SignAndLogo,
    SportBall,
    Object3d,
    Uav,
    Cartoon,
}

impl Scenario {
    pub const ALL: [Scenario; 9] = [
        Scenario::HumanBody,
        Scenario::HumanPart,
        Scenario::Animal,
        Scenario::Vehicle,
        Scenario::SignAndLogo,
        Scenario::SportBall,
        Scenario::Object3d,
        Scenario::Uav,
        Scenario::Cartoon,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::HumanBody => "human-body",
            Scenario::HumanPart => "human-part",
            Scenario::Animal => "animal",
            Scenario::Vehicle => "vehicle",
            Scenario::SignAndLogo => "sign-and-logo",
            Scenario::SportBall => "sport-ball",
            Scenario::Object3d => "3d-object",
            Scenario::Uav => "uav",
            Scenario::Cartoon => "cartoon",
        }
    }

    pub(crate) fn valid_names() -> String {
        Self::ALL.map(Scenario::name).join(", ")
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    /// Case-insensitive; `_` and spaces are accepted in place of `-`.
    fn from_str(s: &str) -> Result<Self> {
        let canonical: String = s
            .trim()
            .chars()
            .map(|c| match c {
                '_' | ' ' => '-',
                c => c.to_ascii_lowercase(),
            })
            .collect();
        Self::ALL
            .into_iter()
            .find(|sc| sc.name() == canonical)
            .ok_or_else(|| Error::UnknownScenario { name: s.to_string() })
    }
}

impl Serialize for Scenario {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Scenario {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One benchmark video: identity, labels and ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceRecord {
    pub id: String,
    pub scenario: Scenario,
    pub sub_scenario: String,
    pub source_dataset: String,
    pub gt: Trajectory,
}

impl SequenceRecord {
    pub fn frame_count(&self) -> usize {
        self.gt.len()
    }
}

/// Predictions of one tracker in one evaluation pass, keyed by sequence id.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultSet {
    pub tracker: String,
    /// 1-based.
    pub pass_index: usize,
    pub trajectories: BTreeMap<String, Trajectory>,
}

impl ResultSet {
    pub fn new(tracker: impl Into<String>, pass_index: usize) -> Self {
        Self {
            tracker: tracker.into(),
            pass_index,
            trajectories: BTreeMap::new(),
        }
    }
}

/// Sequences and tracker results, kept in canonical order: sequences by id,
/// result sets by (tracker, pass).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Corpus {
    sequences: Vec<SequenceRecord>,
    results: Vec<ResultSet>,
}

impl Corpus {
    pub fn new(mut sequences: Vec<SequenceRecord>) -> Result<Self> {
        sequences.sort_by(|a, b| a.id.cmp(&b.id));
        for pair in sequences.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(Error::DuplicateId { id: pair[0].id.clone() });
            }
        }
        for seq in &sequences {
            if seq.gt.is_empty() {
                return Err(Error::FrameCountMismatch {
                    id: seq.id.clone(),
                    expected: 1,
                    actual: 0,
                });
            }
            if seq.sub_scenario.trim().is_empty() {
                return Err(Error::InvalidConfig(format!(
                    "sequence {:?} has an empty sub_scenario",
                    seq.id
                )));
            }
        }
        Ok(Self {
            sequences,
            results: Vec::new(),
        })
    }

    /// Attach result sets after checking every trajectory against its sequence.
    pub fn with_results(mut self, mut results: Vec<ResultSet>) -> Result<Self> {
        results.sort_by(|a, b| (&a.tracker, a.pass_index).cmp(&(&b.tracker, b.pass_index)));
        for pair in results.windows(2) {
            if pair[0].tracker == pair[1].tracker && pair[0].pass_index == pair[1].pass_index {
                return Err(Error::InvalidConfig(format!(
                    "duplicate result set for tracker {:?} pass {}",
                    pair[0].tracker, pair[0].pass_index
                )));
            }
        }
        for rs in &results {
            if rs.pass_index == 0 {
                return Err(Error::InvalidConfig(format!(
                    "tracker {:?}: pass index must be >= 1",
                    rs.tracker
                )));
            }
            for (id, traj) in &rs.trajectories {
                let seq = self
                    .sequence(id)
                    .ok_or_else(|| Error::UnknownSequence { id: id.clone() })?;
                if traj.len() != seq.frame_count() {
                    return Err(Error::LengthMismatch {
                        tracker: rs.tracker.clone(),
                        pass: rs.pass_index,
                        sequence: id.clone(),
                        expected: seq.frame_count(),
                        actual: traj.len(),
                    });
                }
            }
        }
        self.results = results;
        Ok(self)
    }

    pub fn sequences(&self) -> &[SequenceRecord] {
        &self.sequences
    }

    pub fn results(&self) -> &[ResultSet] {
        &self.results
    }

    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    pub fn sequence(&self, id: &str) -> Option<&SequenceRecord> {
        self.sequences
            .binary_search_by(|s| s.id.as_str().cmp(id))
            .ok()
            .map(|i| &self.sequences[i])
    }

    /// Tracker names in canonical order.
    pub fn trackers(&self) -> Vec<String> {
        self.results
            .iter()
            .map(|r| r.tracker.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// Pass indices available for a tracker, ascending.
    pub fn passes(&self, tracker: &str) -> Vec<usize> {
        self.results
            .iter()
            .filter(|r| r.tracker == tracker)
            .map(|r| r.pass_index)
            .collect()
    }

    pub fn result_set(&self, tracker: &str, pass: usize) -> Option<&ResultSet> {
        self.results
            .iter()
            .find(|r| r.tracker == tracker && r.pass_index == pass)
    }

    pub fn prediction(&self, tracker: &str, pass: usize, sequence: &str) -> Option<&Trajectory> {
        self.result_set(tracker, pass)
            .and_then(|r| r.trajectories.get(sequence))
    }

    /// Restrict to the given sequence ids, keeping the matching predictions.
    pub fn subset<S: AsRef<str>>(&self, ids: &[S]) -> Result<Corpus> {
        let wanted: BTreeSet<&str> = ids.iter().map(AsRef::as_ref).collect();
        for id in &wanted {
            if self.sequence(id).is_none() {
                return Err(Error::UnknownSequence { id: id.to_string() });
            }
        }
        let sequences = self
            .sequences
            .iter()
            .filter(|s| wanted.contains(s.id.as_str()))
            .cloned()
            .collect();
        let results = self
            .results
            .iter()
            .map(|rs| ResultSet {
                tracker: rs.tracker.clone(),
                pass_index: rs.pass_index,
                trajectories: rs
                    .trajectories
                    .iter()
                    .filter(|(id, _)| wanted.contains(id.as_str()))
                    .map(|(id, t)| (id.clone(), t.clone()))
                    .collect(),
            })
            .collect();
        Ok(Corpus { sequences, results })
    }
}

pub(crate) fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Map a serde_json error onto the source text so it carries a byte offset.
pub(crate) fn document_error(path: &Path, text: &str, err: &serde_json::Error) -> Error {
    let (line, column) = (err.line(), err.column());
    let offset = byte_offset(text, line, column);
    Error::Document {
        path: PathBuf::from(path),
        offset,
        line,
        column,
        message: err.to_string(),
        text: text.lines().nth(line.saturating_sub(1)).unwrap_or("").to_string(),
    }
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let line_start: usize = text.split_inclusive('\n').take(line - 1).map(str::len).sum();
    (line_start + column.saturating_sub(1)).min(text.len())
}

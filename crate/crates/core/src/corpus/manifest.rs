//! Manifest documents: a versioned JSON object holding one entry per sequence.
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "sequences": [
//!     { "id": "seq01", "scenario": "animal", "sub_scenario": "bird-flying",
//!       "source_dataset": "OTB100", "gt_path": "gt/seq01.txt", "frame_count": 120 }
//!   ]
//! }
//! ```
//!
//! `gt_path` is resolved relative to the manifest's directory.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::annotation::{read_trajectory, write_trajectory};
use super::{document_error, read_text, write_text, Corpus, Scenario, SequenceRecord};

pub const MANIFEST_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub id: String,
    pub scenario: String,
    pub sub_scenario: String,
    pub source_dataset: String,
    pub gt_path: PathBuf,
    pub frame_count: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestDoc {
    format_version: u32,
    sequences: Vec<ManifestEntry>,
}

/// Load sequence metadata and ground truth. The returned corpus has no results.
pub fn load_manifest(path: &Path) -> Result<Corpus> {
    let text = read_text(path)?;
    let doc: ManifestDoc = serde_json::from_str(&text).map_err(|e| document_error(path, &text, &e))?;
    if doc.format_version != MANIFEST_VERSION {
        return Err(Error::VersionMismatch {
            path: path.to_path_buf(),
            expected: MANIFEST_VERSION,
            found: doc.format_version,
        });
    }
    let base = path.parent().unwrap_or(Path::new(""));

    let sequences = doc
        .sequences
        .into_par_iter()
        .map(|entry| {
            let scenario: Scenario = entry.scenario.parse()?;
            if entry.id.is_empty() {
                return Err(Error::InvalidConfig(format!("{}: empty sequence id", path.display())));
            }
            if entry.sub_scenario.trim().is_empty() {
                return Err(Error::InvalidConfig(format!(
                    "{}: sequence {:?} has an empty sub_scenario",
                    path.display(),
                    entry.id
                )));
            }
            let gt = read_trajectory(&base.join(&entry.gt_path))?;
            if gt.len() != entry.frame_count || gt.is_empty() {
                return Err(Error::FrameCountMismatch {
                    id: entry.id,
                    expected: entry.frame_count,
                    actual: gt.len(),
                });
            }
            Ok(SequenceRecord {
                id: entry.id,
                scenario,
                sub_scenario: entry.sub_scenario,
                source_dataset: entry.source_dataset,
                gt,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Corpus::new(sequences)
}

/// Write `manifest.json` plus `gt/<id>.txt` for every sequence under `dir`.
pub fn save_manifest(dir: &Path, corpus: &Corpus) -> Result<PathBuf> {
    let mut entries = Vec::with_capacity(corpus.len());
    for seq in corpus.sequences() {
        let gt_path = PathBuf::from("gt").join(format!("{}.txt", seq.id));
        write_trajectory(&dir.join(&gt_path), &seq.gt)?;
        entries.push(ManifestEntry {
            id: seq.id.clone(),
            scenario: seq.scenario.name().to_string(),
            sub_scenario: seq.sub_scenario.clone(),
            source_dataset: seq.source_dataset.clone(),
            gt_path,
            frame_count: seq.frame_count(),
        });
    }
    let doc = ManifestDoc {
        format_version: MANIFEST_VERSION,
        sequences: entries,
    };
    let path = dir.join("manifest.json");
    let mut text = serde_json::to_string_pretty(&doc).expect("manifest serializes");
    text.push('\n');
    write_text(&path, &text)?;
    Ok(path)
}

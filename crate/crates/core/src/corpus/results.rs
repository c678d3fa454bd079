//! Tracker output trees laid out as `<root>/<tracker>/pass<K>/<sequence_id>.txt`.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};

use super::annotation::{read_trajectory, write_trajectory};
use super::{Corpus, ResultSet};

pub fn result_path(root: &Path, tracker: &str, pass: usize, sequence: &str) -> PathBuf {
    root.join(tracker)
        .join(format!("pass{pass}"))
        .join(format!("{sequence}.txt"))
}

fn sorted_subdirs(dir: &Path) -> Result<Vec<(String, PathBuf)>> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let path = entry.path();
        if path.is_dir() {
            if let Some(name) = path.file_name().and_then(|n| n.to_str()) {
                out.push((name.to_string(), path));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Load one result set per (tracker, pass) found under `root`.
///
/// Every tracker needs a `pass1` directory; pass directories above `max_passes`
/// are rejected. Each pass must hold a file for every corpus sequence whose
/// length equals the sequence's frame count. Files for sequences outside the
/// corpus are ignored, so a subset manifest can share a results tree.
pub fn load_results(root: &Path, corpus: &Corpus, max_passes: usize) -> Result<Vec<ResultSet>> {
    if max_passes == 0 {
        return Err(Error::InvalidConfig("passes must be >= 1".into()));
    }
    let mut jobs = Vec::new();
    for (tracker, tracker_dir) in sorted_subdirs(root)? {
        let mut passes = Vec::new();
        for (name, _) in sorted_subdirs(&tracker_dir)? {
            let Some(k) = name.strip_prefix("pass").and_then(|k| k.parse::<usize>().ok()) else {
                continue;
            };
            if k == 0 || k > max_passes {
                return Err(Error::InvalidConfig(format!(
                    "{}: pass index {k} outside 1..={max_passes}",
                    tracker_dir.join(&name).display()
                )));
            }
            passes.push(k);
        }
        if !passes.contains(&1) {
            return Err(Error::MissingResult {
                tracker: tracker.clone(),
                pass: 1,
                sequence: corpus.sequences().first().map(|s| s.id.clone()).unwrap_or_default(),
                path: tracker_dir.join("pass1"),
            });
        }
        passes.sort_unstable();
        jobs.extend(passes.into_iter().map(|k| (tracker.clone(), k)));
    }
    if jobs.is_empty() {
        return Err(Error::Empty("no tracker directories under results root"));
    }

    jobs.into_par_iter()
        .map(|(tracker, pass)| {
            let trajectories = corpus
                .sequences()
                .par_iter()
                .map(|seq| {
                    let path = result_path(root, &tracker, pass, &seq.id);
                    if !path.is_file() {
                        return Err(Error::MissingResult {
                            tracker: tracker.clone(),
                            pass,
                            sequence: seq.id.clone(),
                            path,
                        });
                    }
                    let traj = read_trajectory(&path)?;
                    if traj.len() != seq.frame_count() {
                        return Err(Error::LengthMismatch {
                            tracker: tracker.clone(),
                            pass,
                            sequence: seq.id.clone(),
                            expected: seq.frame_count(),
                            actual: traj.len(),
                        });
                    }
                    Ok((seq.id.clone(), traj))
                })
                .collect::<Result<_>>()?;
            Ok(ResultSet {
                tracker,
                pass_index: pass,
                trajectories,
            })
        })
        .collect()
}

pub fn write_results(root: &Path, results: &[ResultSet]) -> Result<()> {
    for rs in results {
        for (id, traj) in &rs.trajectories {
            write_trajectory(&result_path(root, &rs.tracker, rs.pass_index, id), traj)?;
        }
    }
    Ok(())
}

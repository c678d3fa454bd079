//! Versioned quality report documents.
//!
//! Numbers are written in shortest round-trip form, so a save/load cycle is
//! bit-exact.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quality::{QualityParams, QualityReport};

use super::{document_error, read_text, write_text};

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct QualityReportFile {
    pub params: QualityParams,
    pub reports: Vec<QualityReport>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReportDoc {
    format_version: u32,
    eta: f64,
    norm_min: f64,
    norm_max: f64,
    epsilon: f64,
    sequences: Vec<QualityReport>,
}

/// Render the document text; `save_quality_report` writes exactly this.
pub fn render_quality_report(file: &QualityReportFile) -> String {
    let doc = ReportDoc {
        format_version: REPORT_VERSION,
        eta: file.params.eta,
        norm_min: file.params.norm_min,
        norm_max: file.params.norm_max,
        epsilon: file.params.epsilon,
        sequences: file.reports.clone(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
    text.push('\n');
    text
}

pub fn save_quality_report(file: &QualityReportFile, path: &Path) -> Result<()> {
    write_text(path, &render_quality_report(file))
}

pub fn load_quality_report(path: &Path) -> Result<QualityReportFile> {
    let text = read_text(path)?;
    parse_quality_report(&text, path)
}

pub(crate) fn parse_quality_report(text: &str, path: &Path) -> Result<QualityReportFile> {
    // Check the version before the full parse so a future layout fails with a
    // version error rather than a field error.
    #[derive(Deserialize)]
    struct Header {
        format_version: u32,
    }
    if let Ok(h) = serde_json::from_str::<Header>(text) {
        if h.format_version != REPORT_VERSION {
            return Err(Error::VersionMismatch {
                path: path.to_path_buf(),
                expected: REPORT_VERSION,
                found: h.format_version,
            });
        }
    }
    let doc: ReportDoc = serde_json::from_str(text).map_err(|e| document_error(path, text, &e))?;
    Ok(QualityReportFile {
        params: QualityParams {
            eta: doc.eta,
            norm_min: doc.norm_min,
            norm_max: doc.norm_max,
            epsilon: doc.epsilon,
        },
        reports: doc.sequences,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn report(id: &str, c: f64, d: f64, v_raw: f64, v: f64) -> QualityReport {
        QualityReport {
            sequence_id: id.into(),
            challenge: c,
            discrimination: d,
            variation_raw: v_raw,
            variation: v,
            quality: c * d * v,
        }
    }

    fn sample() -> QualityReportFile {
        QualityReportFile {
            params: QualityParams::default(),
            reports: vec![
                report("a", 0.1, 1.0, (1e-6f64).ln(), 0.1),
                report("b", 1.0 / 3.0, std::f64::consts::E, std::f64::consts::LN_2, 1.0),
                report("c", 0.7, 1.1051709180756477, -1.6094379124341003, 10.0),
            ],
        }
    }

    #[test]
    fn three_sequences_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("q.json");
        let f = sample();
        save_quality_report(&f, &p).unwrap();
        assert_eq!(load_quality_report(&p).unwrap(), f);
    }

    #[test]
    fn empty_report_is_valid() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("q.json");
        let f = QualityReportFile {
            params: QualityParams::default(),
            reports: vec![],
        };
        save_quality_report(&f, &p).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert!(text.contains("\"sequences\": []"));
        assert_eq!(load_quality_report(&p).unwrap().reports.len(), 0);
    }

    #[test]
    fn header_and_field_names() {
        let text = render_quality_report(&sample());
        for key in [
            "format_version",
            "eta",
            "norm_min",
            "norm_max",
            "\"id\"",
            "\"C\"",
            "\"D\"",
            "\"V_raw\"",
            "\"V\"",
            "\"Q\"",
        ] {
            assert!(text.contains(key), "missing {key}");
        }
    }

    #[test]
    fn trailing_garbage_reports_byte_offset() {
        let mut text = render_quality_report(&sample());
        let clean_len = text.len();
        text.push_str("}}xx");
        match parse_quality_report(&text, Path::new("q.json")).unwrap_err() {
            Error::Document { offset, .. } => assert_eq!(offset, clean_len),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn version_mismatch() {
        let text = render_quality_report(&sample()).replace("\"format_version\": 1", "\"format_version\": 2");
        assert!(matches!(
            parse_quality_report(&text, Path::new("q.json")).unwrap_err(),
            Error::VersionMismatch { found: 2, .. }
        ));
    }

    proptest! {
        #[test]
        fn bitwise_round_trip(vals in proptest::collection::vec(
            (0.0..=1.0f64, 1.0..10.0f64, -20.0..5.0f64, 0.01..100.0f64), 0..20)
        ) {
            let f = QualityReportFile {
                params: QualityParams { eta: 3.7, norm_min: 0.2, norm_max: 0.9, epsilon: 1e-9 },
                reports: vals.iter().enumerate()
                    .map(|(i, &(c, d, vr, v))| report(&format!("s{i:03}"), c, d, vr, v))
                    .collect(),
            };
            let back = parse_quality_report(&render_quality_report(&f), Path::new("q.json")).unwrap();
            for (a, b) in f.reports.iter().zip(&back.reports) {
                prop_assert_eq!(a.quality.to_bits(), b.quality.to_bits());
                prop_assert_eq!(a.variation_raw.to_bits(), b.variation_raw.to_bits());
            }
            prop_assert_eq!(back, f);
        }
    }
}

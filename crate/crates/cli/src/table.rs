//! Dataset-by-tracker summary table: mIoU per tracker, then mean, NStd and test time.
//!
//! Rendered values are percentages rounded to one decimal (NStd to two);
//! `evaluation.json` keeps full precision.

use std::collections::BTreeSet;

use trackbench::Evaluation;

pub(crate) fn render_table(evals: &[Evaluation]) -> String {
    let trackers: BTreeSet<&str> = evals
        .iter()
        .flat_map(|e| e.trackers.iter().map(|t| t.name.as_str()))
        .collect();
    let with_time = evals.iter().any(|e| e.test_time_min.is_some());

    let mut header: Vec<String> = vec!["dataset".into()];
    header.extend(trackers.iter().map(|t| t.to_string()));
    header.push("mean_miou".into());
    header.push("nstd_miou".into());
    if with_time {
        header.push("test_time_min".into());
    }

    let mut out = csv_line(&header);
    for e in evals {
        let mut row = vec![e.dataset.clone()];
        for t in &trackers {
            row.push(
                e.tracker(t)
                    .map(|s| format!("{:.1}", s.miou * 100.0))
                    .unwrap_or_default(),
            );
        }
        row.push(format!("{:.1}", e.mean_miou * 100.0));
        row.push(e.nstd_miou.map(|v| format!("{v:.2}")).unwrap_or_default());
        if with_time {
            row.push(e.test_time_min.map(|v| format!("{v:.0}")).unwrap_or_default());
        }
        out.push_str(&csv_line(&row));
    }
    out
}

fn csv_line(fields: &[String]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(fields).expect("in-memory write");
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

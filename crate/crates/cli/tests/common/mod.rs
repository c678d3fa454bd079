//! Independent reference implementations used to check the library.
//!
//! Nothing here calls into the scoring or selection code paths: overlaps,
//! means, deviations, normalization and selection are recomputed from scratch
//! in the most direct form available.

#![allow(dead_code)]

use std::collections::BTreeMap;

use trackbench::{Corpus, QualityReport, Scenario, SelectionConfig};

pub fn naive_iou(a: [f64; 4], b: [f64; 4]) -> f64 {
    let (ax1, ay1, ax2, ay2) = (a[0], a[1], a[0] + a[2], a[1] + a[3]);
    let (bx1, by1, bx2, by2) = (b[0], b[1], b[0] + b[2], b[1] + b[3]);
    let w = (ax2.min(bx2) - ax1.max(bx1)).max(0.0);
    let h = (ay2.min(by2) - ay1.max(by1)).max(0.0);
    let inter = w * h;
    let union = a[2] * a[3] + b[2] * b[3] - inter;
    if union <= 0.0 {
        0.0
    } else if a == b {
        1.0
    } else {
        inter / union
    }
}

/// Pass-1 overlap rows, trackers in name order, ground-truth-absent frames skipped.
pub fn naive_rows(corpus: &Corpus, seq_id: &str) -> Vec<Vec<f64>> {
    let seq = corpus.sequence(seq_id).unwrap();
    let mut trackers: Vec<String> = corpus.results().iter().map(|r| r.tracker.clone()).collect();
    trackers.sort();
    trackers.dedup();
    trackers
        .iter()
        .map(|t| {
            let pred = corpus.prediction(t, 1, seq_id).unwrap();
            let mut row = Vec::new();
            for j in 0..seq.gt.len() {
                let Some(g) = seq.gt.frames()[j] else { continue };
                let v = match pred.frames()[j] {
                    None => 0.0,
                    Some(p) => naive_iou([g.x, g.y, g.w, g.h], [p.x, p.y, p.w, p.h]),
                };
                row.push(v);
            }
            row
        })
        .collect()
}

pub struct NaiveQuality {
    pub c: f64,
    pub d: f64,
    pub v_raw: f64,
    pub v: f64,
    pub q: f64,
}

/// Challenge, discrimination, variation and quality for every sequence, recomputed directly.
pub fn naive_quality(corpus: &Corpus, eta: f64, a: f64, b: f64, eps: f64) -> BTreeMap<String, NaiveQuality> {
    let mut partial = Vec::new();
    for seq in corpus.sequences() {
        let rows = naive_rows(corpus, &seq.id);
        let n = rows.len() as f64;
        let m = rows[0].len() as f64;
        let mut grand = 0.0;
        for row in &rows {
            for v in row {
                grand += v;
            }
        }
        let c = 1.0 - grand / (n * m);

        let means: Vec<f64> = rows.iter().map(|r| r.iter().sum::<f64>() / m).collect();
        let mu = means.iter().sum::<f64>() / n;
        let var = means.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / n;
        let sigma = if means.iter().all(|x| *x == means[0]) {
            0.0
        } else {
            var.sqrt()
        };
        let d = (eta * sigma).exp();

        let mut total = 0.0;
        for row in &rows {
            for j in 1..row.len() {
                total += (row[j] - row[j - 1]).abs();
            }
        }
        let v_raw = if total > eps { total.ln() } else { eps.ln() };
        partial.push((seq.id.clone(), c, d, v_raw, (seq.gt.len() as f64).ln()));
    }

    let norm = |vals: Vec<f64>| -> Vec<f64> {
        let lo = vals.iter().cloned().fold(f64::MAX, f64::min);
        let hi = vals.iter().cloned().fold(f64::MIN, f64::max);
        vals.iter()
            .map(|x| {
                if hi == lo {
                    b
                } else {
                    a + (b - a) * (x - lo) / (hi - lo)
                }
            })
            .collect()
    };
    let num = norm(partial.iter().map(|p| p.3).collect());
    let den = norm(partial.iter().map(|p| p.4).collect());

    partial
        .into_iter()
        .enumerate()
        .map(|(i, (id, c, d, v_raw, _))| {
            let v = num[i] / den[i];
            (
                id,
                NaiveQuality {
                    c,
                    d,
                    v_raw,
                    v,
                    q: c * d * v,
                },
            )
        })
        .collect()
}

pub fn max_quality_diff(reports: &[QualityReport], oracle: &BTreeMap<String, NaiveQuality>) -> f64 {
    assert_eq!(reports.len(), oracle.len());
    reports
        .iter()
        .map(|r| {
            let o = &oracle[&r.sequence_id];
            [
                (r.challenge - o.c).abs(),
                (r.discrimination - o.d).abs(),
                (r.variation_raw - o.v_raw).abs(),
                (r.variation - o.v).abs(),
                (r.quality - o.q).abs(),
            ]
            .into_iter()
            .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, PartialEq)]
pub struct OracleSelection {
    pub selected: Vec<String>,
    pub top_quality: Vec<String>,
    pub counts: BTreeMap<Scenario, usize>,
    pub shortfalls: BTreeMap<Scenario, usize>,
}

/// Selection characterized by counting rather than by a sequential pass.
///
/// A sequence is a group leader when nothing in its (scenario, sub-scenario)
/// group outranks it. Each scenario keeps its best `quota` eligible sequences
/// (leaders when deduplicating). A selected sequence came from the top
/// fraction when it is among the first k of the relevant ranking and among
/// the best `quota` such members of its scenario.
pub fn oracle_select(reports: &[QualityReport], corpus: &Corpus, cfg: &SelectionConfig) -> OracleSelection {
    let q: BTreeMap<&str, f64> = reports.iter().map(|r| (r.sequence_id.as_str(), r.quality)).collect();
    let ids: Vec<&str> = q.keys().copied().collect();
    let better = |x: &str, y: &str| q[x] > q[y] || (q[x] == q[y] && x < y);
    let info: BTreeMap<&str, (Scenario, &str)> = ids
        .iter()
        .map(|&x| {
            let s = corpus.sequence(x).unwrap();
            (x, (s.scenario, s.sub_scenario.as_str()))
        })
        .collect();
    let rank: BTreeMap<&str, usize> = ids
        .iter()
        .map(|&x| (x, ids.iter().filter(|y| better(y, x)).count()))
        .collect();
    let leader: BTreeMap<&str, bool> = ids
        .iter()
        .map(|&x| (x, !ids.iter().any(|y| info[y] == info[x] && better(y, x))))
        .collect();
    let n = ids.len();
    let k = ((cfg.top_fraction * n as f64) + 1e-9).floor() as usize;

    let eligible: BTreeMap<&str, bool> = ids
        .iter()
        .map(|&x| (x, !cfg.dedupe_by_sub_scenario || leader[x]))
        .collect();
    let in_stage: BTreeMap<&str, bool> = ids
        .iter()
        .map(|&x| {
            let v = if !cfg.dedupe_by_sub_scenario {
                rank[x] < k
            } else if cfg.paper_order {
                rank[x] < k && leader[x]
            } else {
                leader[x] && ids.iter().filter(|y| leader[*y] && better(y, x)).count() < k
            };
            (x, v)
        })
        .collect();

    let mut selected = Vec::new();
    let mut top = Vec::new();
    for &x in &ids {
        let sc = info[x].0;
        if eligible[x] {
            let ahead = ids
                .iter()
                .filter(|y| eligible[*y] && info[*y].0 == sc && better(y, x))
                .count();
            if ahead < cfg.per_scenario_quota {
                selected.push(x.to_string());
            }
        }
        if in_stage[x] {
            let ahead = ids
                .iter()
                .filter(|y| in_stage[*y] && info[*y].0 == sc && better(y, x))
                .count();
            if ahead < cfg.per_scenario_quota {
                top.push(x.to_string());
            }
        }
    }
    let by_rank = |v: &mut Vec<String>| v.sort_by_key(|x| rank[x.as_str()]);
    by_rank(&mut selected);
    by_rank(&mut top);

    let mut counts: BTreeMap<Scenario, usize> = Scenario::ALL.iter().map(|&s| (s, 0)).collect();
    for x in &selected {
        *counts.get_mut(&info[x.as_str()].0).unwrap() += 1;
    }
    let shortfalls = counts
        .iter()
        .filter(|(_, &c)| c < cfg.per_scenario_quota)
        .map(|(&s, &c)| (s, cfg.per_scenario_quota - c))
        .collect();
    OracleSelection {
        selected,
        top_quality: top,
        counts,
        shortfalls,
    }
}

/// Published score table rows: dataset, ten published per-tracker mIoU values (%), printed mean, printed NStd.
pub const PUBLISHED_SCORES: [(&str, [f64; 10], f64, f64); 9] = [
    (
        "OTB100",
        [66.6, 65.6, 65.3, 65.6, 67.4, 68.7, 69.4, 69.7, 67.0, 69.0],
        67.4,
        2.40,
    ),
    (
        "NUS-PRO",
        [53.1, 56.7, 52.7, 56.6, 59.1, 59.2, 60.5, 60.2, 62.8, 62.4],
        58.3,
        5.59,
    ),
    (
        "UAV123",
        [57.8, 58.3, 59.1, 63.2, 64.8, 66.7, 63.7, 65.4, 65.5, 68.6],
        63.3,
        5.42,
    ),
    (
        "VisDrone",
        [57.2, 63.1, 54.5, 57.4, 61.1, 54.8, 61.6, 62.5, 60.7, 60.2],
        59.3,
        4.94,
    ),
    (
        "NFS30",
        [49.7, 54.3, 52.6, 58.8, 62.4, 62.9, 62.9, 64.1, 63.6, 65.6],
        59.7,
        8.46,
    ),
    (
        "TNet",
        [69.0, 69.2, 71.7, 72.5, 74.9, 75.8, 74.1, 78.3, 80.7, 81.1],
        74.7,
        5.33,
    ),
    (
        "Got10K",
        [48.8, 59.9, 53.8, 56.1, 61.4, 64.6, 62.1, 68.2, 70.2, 68.8],
        61.2,
        9.91,
    ),
    (
        "LaSOT",
        [49.2, 55.2, 51.0, 51.0, 57.4, 60.8, 53.4, 62.4, 65.5, 66.3],
        57.2,
        9.42,
    ),
    (
        "ITB",
        [44.1, 47.7, 44.9, 47.2, 53.7, 54.4, 52.0, 56.1, 54.7, 57.6],
        51.2,
        8.44,
    ),
];

pub const PUBLISHED_TRACKERS: [&str; 10] = [
    "RPN++", "Ocean", "GAT", "ATOM", "DiMP", "PrDiMP", "KYS", "TrDiMP", "TransT", "Stark",
];

pub fn run_cli(args: &[&str]) -> i32 {
    let mut argv = vec!["trackbench"];
    argv.extend_from_slice(args);
    trackbench_cli::run(argv)
}

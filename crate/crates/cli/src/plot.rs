//! CSV and SVG emission for challenge curves and tracker score bars.
//!
//! SVGs are self-contained; axis labels, series names and legend values are
//! plain `<text>` nodes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Result};

use trackbench::ChallengeCurve;

use crate::write_file;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 180.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn plot_w() -> f64 {
    WIDTH - LEFT - RIGHT
}

fn plot_h() -> f64 {
    HEIGHT - TOP - BOTTOM
}

fn px(x: f64) -> f64 {
    LEFT + x * plot_w()
}

fn py(y: f64, y_max: f64) -> f64 {
    TOP + (1.0 - y / y_max) * plot_h()
}

fn svg_open(out: &mut String, title: &str) {
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(
        out,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="18" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + plot_w() / 2.0,
        escape(title)
    )
    .unwrap();
}

fn axes(out: &mut String, x_label: &str, y_label: &str, y_max: f64) {
    let (x0, y0) = (LEFT, TOP + plot_h());
    writeln!(
        out,
        r#"<line x1="{x0}" y1="{y0}" x2="{}" y2="{y0}" stroke="black"/>"#,
        LEFT + plot_w()
    )
    .unwrap();
    writeln!(
        out,
        r#"<line x1="{x0}" y1="{TOP}" x2="{x0}" y2="{y0}" stroke="black"/>"#
    )
    .unwrap();
    for k in 0..=5 {
        let v = y_max * k as f64 / 5.0;
        let y = py(v, y_max);
        writeln!(
            out,
            r#"<line x1="{}" y1="{y}" x2="{x0}" y2="{y}" stroke="black"/>"#,
            x0 - 4.0
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="end">{v:.1}</text>"#,
            x0 - 6.0,
            y + 4.0
        )
        .unwrap();
    }
    writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w() / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        TOP + plot_h() / 2.0,
        TOP + plot_h() / 2.0,
        escape(y_label)
    )
    .unwrap();
}

fn legend_entry(out: &mut String, index: usize, color: &str, label: &str) {
    let x = LEFT + plot_w() + 15.0;
    let y = TOP + 10.0 + 18.0 * index as f64;
    writeln!(
        out,
        r#"<rect x="{x}" y="{}" width="12" height="12" fill="{color}"/>"#,
        y - 10.0
    )
    .unwrap();
    writeln!(out, r#"<text x="{}" y="{y}">{}</text>"#, x + 18.0, escape(label)).unwrap();
}

pub(crate) fn challenge_svg(curves: &[(String, ChallengeCurve)]) -> String {
    let mut out = String::new();
    svg_open(&mut out, "Challenge plot");
    axes(&mut out, "mIoU error threshold", "ratio of challenging sequences", 1.0);
    for k in 0..=5 {
        let v = k as f64 / 5.0;
        let x = px(v);
        let y0 = TOP + plot_h();
        writeln!(
            out,
            r#"<line x1="{x}" y1="{y0}" x2="{x}" y2="{}" stroke="black"/>"#,
            y0 + 4.0
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{x}" y="{}" text-anchor="middle">{v:.1}</text>"#,
            y0 + 18.0
        )
        .unwrap();
    }
    for (i, (name, curve)) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = curve
            .thresholds
            .iter()
            .zip(&curve.fractions)
            .map(|(&t, &f)| format!("{:.2},{:.2}", px(t), py(f, 1.0)))
            .collect();
        writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"><title>{}</title></polyline>"#,
            points.join(" "),
            escape(name)
        )
        .unwrap();
        legend_entry(&mut out, i, color, &format!("{name} [{:.3}]", curve.auc));
    }
    out.push_str("</svg>\n");
    out
}

pub(crate) fn challenge_csv(curves: &[(String, ChallengeCurve)]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["series", "threshold", "fraction"]).unwrap();
    for (name, curve) in curves {
        for (t, f) in curve.thresholds.iter().zip(&curve.fractions) {
            w.write_record([name.clone(), t.to_string(), f.to_string()]).unwrap();
        }
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

/// One named set of per-tracker scores, e.g. the full corpus or a subset.
#[derive(Debug, Clone)]
pub struct BarSeries {
    pub name: String,
    /// (tracker, score) pairs; every series lists the same trackers.
    pub scores: Vec<(String, f64)>,
}

/// Trackers in the order of the first series, which callers pass in rank order.
pub(crate) fn bar_csv(series: &[BarSeries]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["tracker".to_string()];
    header.extend(series.iter().map(|s| s.name.clone()));
    w.write_record(&header).unwrap();
    if let Some(first) = series.first() {
        for (tracker, _) in &first.scores {
            let mut row = vec![tracker.clone()];
            for s in series {
                let v = s.scores.iter().find(|(t, _)| t == tracker).map(|(_, v)| v.to_string());
                row.push(v.unwrap_or_default());
            }
            w.write_record(&row).unwrap();
        }
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

pub(crate) fn bar_svg(series: &[BarSeries], y_label: &str) -> String {
    let mut out = String::new();
    svg_open(&mut out, "Tracker scores");
    axes(&mut out, "tracker", y_label, 1.0);
    let trackers: Vec<&String> = series
        .first()
        .map(|s| s.scores.iter().map(|(t, _)| t).collect())
        .unwrap_or_default();
    let slot = plot_w() / trackers.len().max(1) as f64;
    let bar = slot * 0.8 / series.len().max(1) as f64;
    for (ti, tracker) in trackers.iter().enumerate() {
        let x0 = LEFT + slot * ti as f64 + slot * 0.1;
        for (si, s) in series.iter().enumerate() {
            let Some((_, v)) = s.scores.iter().find(|(t, _)| t == *tracker) else {
                continue;
            };
            let y = py(v.clamp(0.0, 1.0), 1.0);
            writeln!(
                out,
                r#"<rect x="{:.2}" y="{y:.2}" width="{bar:.2}" height="{:.2}" fill="{}"><title>{} {}: {v:.3}</title></rect>"#,
                x0 + bar * si as f64,
                TOP + plot_h() - y,
                PALETTE[si % PALETTE.len()],
                escape(&s.name),
                escape(tracker)
            )
            .unwrap();
        }
        writeln!(
            out,
            r#"<text x="{:.2}" y="{}" text-anchor="middle">{}</text>"#,
            x0 + slot * 0.4,
            TOP + plot_h() + 18.0,
            escape(tracker)
        )
        .unwrap();
    }
    for (si, s) in series.iter().enumerate() {
        legend_entry(&mut out, si, PALETTE[si % PALETTE.len()], &s.name);
    }
    out.push_str("</svg>\n");
    out
}

fn ensure_dir(dir: &Path) -> Result<()> {
    if dir.exists() && !dir.is_dir() {
        bail!("{} is not a directory", dir.display());
    }
    std::fs::create_dir_all(dir).map_err(|e| anyhow::anyhow!("cannot create output directory {}: {e}", dir.display()))
}

/// Write `<stem>.csv` and `<stem>.svg` for a set of challenge curves.
pub fn write_challenge_plot(curves: &[(String, ChallengeCurve)], dir: &Path, stem: &str) -> Result<(PathBuf, PathBuf)> {
    ensure_dir(dir)?;
    let csv_path = dir.join(format!("{stem}.csv"));
    let svg_path = dir.join(format!("{stem}.svg"));
    write_file(&csv_path, &challenge_csv(curves))?;
    write_file(&svg_path, &challenge_svg(curves))?;
    Ok((csv_path, svg_path))
}

/// Write `<stem>.csv` and `<stem>.svg` for per-tracker score bars.
pub fn write_bar_plot(series: &[BarSeries], y_label: &str, dir: &Path, stem: &str) -> Result<(PathBuf, PathBuf)> {
    ensure_dir(dir)?;
    let csv_path = dir.join(format!("{stem}.csv"));
    let svg_path = dir.join(format!("{stem}.svg"));
    write_file(&csv_path, &bar_csv(series))?;
    write_file(&svg_path, &bar_svg(series, y_label))?;
    Ok((csv_path, svg_path))
}

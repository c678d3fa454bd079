//! Per-frame box files: one `x,y,w,h` line per frame.
//!
//! Commas, tabs and runs of whitespace are all accepted as separators on read.
//! An empty line or `NaN,NaN,NaN,NaN` marks an absent target; writes always use
//! commas and the NaN form.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{BoundingBox, Frame, Trajectory};

use super::{read_text, write_text};

pub fn parse_trajectory(text: &str, path: &Path) -> Result<Trajectory> {
    text.lines()
        .enumerate()
        .map(|(i, line)| {
            parse_line(line).map_err(|message| Error::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                text: line.to_string(),
                message,
            })
        })
        .collect::<Result<Vec<Frame>>>()
        .map(Trajectory::new)
}

fn parse_line(line: &str) -> std::result::Result<Frame, String> {
    let line = line.trim();
    if line.is_empty() {
        return Ok(None);
    }
    let fields: Vec<&str> = line
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|f| !f.is_empty())
        .collect();
    if fields.len() != 4 {
        return Err(format!("expected 4 fields, found {}", fields.len()));
    }
    let mut v = [0.0f64; 4];
    for (slot, field) in v.iter_mut().zip(&fields) {
        *slot = field.parse::<f64>().map_err(|_| format!("not a number: {field:?}"))?;
    }
    if v.iter().all(|x| x.is_nan()) {
        return Ok(None);
    }
    let b = BoundingBox::new(v[0], v[1], v[2], v[3]);
    if !b.is_valid() {
        return Err("box must have finite coordinates and non-negative size".into());
    }
    Ok(Some(b))
}

pub fn render_trajectory(traj: &Trajectory) -> String {
    let mut out = String::with_capacity(traj.len() * 24);
    for frame in traj.frames() {
        match frame {
            Some(b) => writeln!(out, "{},{},{},{}", b.x, b.y, b.w, b.h),
            None => writeln!(out, "NaN,NaN,NaN,NaN"),
        }
        .expect("writing to a String");
    }
    out
}

pub fn read_trajectory(path: &Path) -> Result<Trajectory> {
    parse_trajectory(&read_text(path)?, path)
}

pub fn write_trajectory(path: &Path, traj: &Trajectory) -> Result<()> {
    write_text(path, &render_trajectory(traj))
}

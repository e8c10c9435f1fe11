//! CSV serialization of run logs.
//!
//! One row per frame with a fixed header:
//!
//! ```text
//! frame,t,x,y,z,yaw,raw_cx,raw_cy,kf_cx,kf_cy,valid,command,vx,yaw_rate,vz,detect_time
//! ```
//!
//! Floats carry six significant digits; absent values (no detection, no
//! track, timing disabled) are empty cells. `valid` is `1` or `0`. The
//! encoding is a pure function of the log, so identical runs serialize
//! to identical bytes.

use crate::detection::Centroid;
use crate::harness::runner::{FrameCommand, RunRecord};
use crate::harness::{fmt_sig, HarnessError};
use crate::navigation::NavCommand;

pub const CSV_HEADER: &str =
    "frame,t,x,y,z,yaw,raw_cx,raw_cy,kf_cx,kf_cy,valid,command,vx,yaw_rate,vz,detect_time";

/// Serializes records to CSV, header included, trailing newline.
pub fn log_to_csv(records: &[RunRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let opt = |v: Option<f64>| v.map(fmt_sig).unwrap_or_default();
        let row = [
            r.frame.to_string(),
            fmt_sig(r.t),
            fmt_sig(r.x),
            fmt_sig(r.y),
            fmt_sig(r.z),
            fmt_sig(r.yaw),
            opt(r.raw.map(|c| c.cx)),
            opt(r.raw.map(|c| c.cy)),
            opt(r.kf.map(|k| k.0)),
            opt(r.kf.map(|k| k.1)),
            if r.valid { "1" } else { "0" }.to_string(),
            r.command.to_string(),
            fmt_sig(r.vx),
            fmt_sig(r.yaw_rate),
            fmt_sig(r.vz),
            opt(r.detect_time),
        ];
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn csv_err(line: usize, message: impl Into<String>) -> HarnessError {
    HarnessError::Csv { line, message: message.into() }
}

fn parse_command(cell: &str, line: usize) -> Result<FrameCommand, HarnessError> {
    Ok(match cell {
        "takeoff" => FrameCommand::Takeoff,
        "forward" => FrameCommand::Nav(NavCommand::Forward),
        "yaw_left" => FrameCommand::Nav(NavCommand::YawLeft),
        "yaw_right" => FrameCommand::Nav(NavCommand::YawRight),
        "search" => FrameCommand::Nav(NavCommand::Search),
        other => return Err(csv_err(line, format!("unknown command `{other}`"))),
    })
}

/// Parses a CSV produced by [`log_to_csv`] back into records.
pub fn records_from_csv(text: &str) -> Result<Vec<RunRecord>, HarnessError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == CSV_HEADER => {}
        Some((_, header)) => {
            return Err(csv_err(1, format!("unexpected header `{header}`")));
        }
        None => return Err(csv_err(1, "empty file")),
    }

    let mut records = Vec::new();
    for (idx, row) in lines {
        let line = idx + 1;
        if row.is_empty() {
            continue;
        }
        let cells: Vec<&str> = row.split(',').collect();
        if cells.len() != 16 {
            return Err(csv_err(line, format!("expected 16 cells, got {}", cells.len())));
        }
        let f = |cell: &str, what: &str| -> Result<f64, HarnessError> {
            cell.parse::<f64>()
                .map_err(|_| csv_err(line, format!("{what}: `{cell}` is not a number")))
        };
        let opt = |cell: &str, what: &str| -> Result<Option<f64>, HarnessError> {
            if cell.is_empty() { Ok(None) } else { f(cell, what).map(Some) }
        };
        let raw = match (opt(cells[6], "raw_cx")?, opt(cells[7], "raw_cy")?) {
            (Some(cx), Some(cy)) => Some(Centroid { cx, cy }),
            (None, None) => None,
            _ => return Err(csv_err(line, "raw_cx and raw_cy must both be present or absent")),
        };
        let kf = match (opt(cells[8], "kf_cx")?, opt(cells[9], "kf_cy")?) {
            (Some(cx), Some(cy)) => Some((cx, cy)),
            (None, None) => None,
            _ => return Err(csv_err(line, "kf_cx and kf_cy must both be present or absent")),
        };
        let valid = match cells[10] {
            "1" => true,
            "0" => false,
            other => return Err(csv_err(line, format!("valid must be 0 or 1, got `{other}`"))),
        };
        records.push(RunRecord {
            frame: cells[0]
                .parse()
                .map_err(|_| csv_err(line, format!("frame: `{}` is not an index", cells[0])))?,
            t: f(cells[1], "t")?,
            x: f(cells[2], "x")?,
            y: f(cells[3], "y")?,
            z: f(cells[4], "z")?,
            yaw: f(cells[5], "yaw")?,
            raw,
            kf,
            valid,
            command: parse_command(cells[11], line)?,
            vx: f(cells[12], "vx")?,
            yaw_rate: f(cells[13], "yaw_rate")?,
            vz: f(cells[14], "vz")?,
            detect_time: opt(cells[15], "detect_time")?,
        });
    }
    Ok(records)
}

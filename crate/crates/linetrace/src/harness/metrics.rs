//! Summary statistics over a run log.
//!
//! Everything is recomputed from the per-frame records so the same
//! numbers come out whether the log was just produced or read back from
//! CSV. Path-relative figures (cross-track error, completion) need the
//! world and are skipped when it is not supplied. Unless noted, stats
//! cover only cruise frames: takeoff would otherwise pollute altitude
//! and detection figures with the climb.

use nalgebra::Point2;

use crate::harness::runner::{FrameCommand, RunRecord};
use crate::harness::fmt_sig;
use crate::simworld::{wrap_angle, WorldSpec};

/// Fraction of the path that must be covered for a run to count as
/// complete (matches the runner's termination rule).
const COMPLETION_COVERAGE: f64 = 0.9;

#[derive(Debug, Clone, PartialEq)]
pub struct Metrics {
    pub frames: u64,
    /// Simulated timestamp of the last frame, seconds.
    pub sim_duration: f64,
    pub cruise_frames: u64,
    /// Fraction of cruise frames with a raw detection.
    pub detection_rate: Option<f64>,
    pub altitude_mean: Option<f64>,
    pub altitude_min: Option<f64>,
    pub altitude_max: Option<f64>,
    /// Distance from the path centerline over cruise, meters.
    pub cross_track_mean: Option<f64>,
    pub cross_track_max: Option<f64>,
    /// Fraction of the path length covered, capped at 1.
    pub completion: Option<f64>,
    /// Final position within one line width of the path's end.
    pub reached_end: Option<bool>,
    /// Reached the end after covering at least 90% of the path.
    pub completed: Option<bool>,
    /// Frame-to-frame variance of the raw centroid column, px^2.
    pub raw_increment_variance: Option<f64>,
    /// Same for the filtered centroid column.
    pub kf_increment_variance: Option<f64>,
    pub mean_detect_ms: Option<f64>,
    /// Per-frame throughput statistics: each frame with a positive
    /// detection wall time contributes `1 / detect_time`. Informational
    /// only; they describe the host, not the algorithm.
    pub fps_mean: Option<f64>,
    pub fps_max: Option<f64>,
    pub fps_min: Option<f64>,
    /// Net heading change over the whole run, radians, sign preserved.
    pub net_heading_change: f64,
}

fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

fn variance(values: &[f64]) -> Option<f64> {
    if values.len() < 2 {
        return None;
    }
    let m = mean(values)?;
    Some(values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / values.len() as f64)
}

/// Variance of consecutive differences of a possibly gappy series; only
/// adjacent frames where both values exist contribute.
fn increment_variance(series: &[Option<f64>]) -> Option<f64> {
    let increments: Vec<f64> = series
        .windows(2)
        .filter_map(|w| match (w[0], w[1]) {
            (Some(a), Some(b)) => Some(b - a),
            _ => None,
        })
        .collect();
    variance(&increments)
}

pub fn compute_metrics(records: &[RunRecord], world: Option<&WorldSpec>) -> Metrics {
    let cruise: Vec<&RunRecord> =
        records.iter().filter(|r| r.command != FrameCommand::Takeoff).collect();

    let altitudes: Vec<f64> = cruise.iter().map(|r| r.z).collect();
    let detect_times: Vec<f64> = records.iter().filter_map(|r| r.detect_time).collect();

    let (cross_mean, cross_max, completion, reached_end, completed) = match world {
        Some(world) if !records.is_empty() => {
            let errors: Vec<f64> =
                cruise.iter().map(|r| world.cross_track(Point2::new(r.x, r.y))).collect();
            let traversed = cruise
                .iter()
                .filter_map(|r| world.project(Point2::new(r.x, r.y)))
                .map(|p| p.along)
                .fold(0.0f64, f64::max);
            let length = world.length();
            let last = records.last().expect("records nonempty");
            // Same arrival slack as the runner: the steering deadband
            // tolerates a lateral offset of roughly a line width, so
            // demand only that the run ended near the final point, not
            // on top of it.
            let reached = world
                .end_point()
                .map(|end| (Point2::new(last.x, last.y) - end).norm() <= 2.0 * world.line_width);
            let completion = (traversed / length).min(1.0);
            let completed =
                reached.map(|r| r && traversed >= COMPLETION_COVERAGE * length);
            (
                mean(&errors),
                errors.iter().copied().reduce(f64::max),
                Some(completion),
                reached,
                completed,
            )
        }
        _ => (None, None, None, None, None),
    };

    let mean_detect = mean(&detect_times);
    let fps: Vec<f64> = detect_times.iter().filter(|&&s| s > 0.0).map(|s| 1.0 / s).collect();
    Metrics {
        frames: records.len() as u64,
        sim_duration: records.last().map_or(0.0, |r| r.t),
        cruise_frames: cruise.len() as u64,
        detection_rate: if cruise.is_empty() {
            None
        } else {
            Some(cruise.iter().filter(|r| r.raw.is_some()).count() as f64 / cruise.len() as f64)
        },
        altitude_mean: mean(&altitudes),
        altitude_min: altitudes.iter().copied().reduce(f64::min),
        altitude_max: altitudes.iter().copied().reduce(f64::max),
        cross_track_mean: cross_mean,
        cross_track_max: cross_max,
        completion,
        reached_end,
        completed,
        raw_increment_variance: increment_variance(
            &cruise.iter().map(|r| r.raw.map(|c| c.cx)).collect::<Vec<_>>(),
        ),
        kf_increment_variance: increment_variance(
            &cruise.iter().map(|r| r.kf.map(|k| k.0)).collect::<Vec<_>>(),
        ),
        mean_detect_ms: mean_detect.map(|s| s * 1e3),
        fps_mean: mean(&fps),
        fps_max: fps.iter().copied().reduce(f64::max),
        fps_min: fps.iter().copied().reduce(f64::min),
        net_heading_change: records
            .windows(2)
            .map(|w| wrap_angle(w[1].yaw - w[0].yaw))
            .sum(),
    }
}

/// Renders metrics as stable `key = value` text. Unavailable figures are
/// omitted entirely, so the output stays deterministic for timing-free
/// runs.
pub fn metrics_to_text(m: &Metrics) -> String {
    let mut out = String::new();
    let mut line = |key: &str, value: String| {
        out.push_str(key);
        out.push_str(" = ");
        out.push_str(&value);
        out.push('\n');
    };
    line("frames", m.frames.to_string());
    line("sim_duration", fmt_sig(m.sim_duration));
    line("cruise_frames", m.cruise_frames.to_string());
    let mut opt = |key: &str, value: Option<f64>| {
        if let Some(v) = value {
            line(key, fmt_sig(v));
        }
    };
    opt("detection_rate", m.detection_rate);
    opt("altitude_mean", m.altitude_mean);
    opt("altitude_min", m.altitude_min);
    opt("altitude_max", m.altitude_max);
    opt("cross_track_mean", m.cross_track_mean);
    opt("cross_track_max", m.cross_track_max);
    opt("completion", m.completion);
    if let Some(v) = m.reached_end {
        line("reached_end", v.to_string());
    }
    if let Some(v) = m.completed {
        line("completed", v.to_string());
    }
    let mut opt = |key: &str, value: Option<f64>| {
        if let Some(v) = value {
            line(key, fmt_sig(v));
        }
    };
    opt("raw_increment_variance", m.raw_increment_variance);
    opt("kf_increment_variance", m.kf_increment_variance);
    opt("mean_detect_ms", m.mean_detect_ms);
    opt("fps_mean", m.fps_mean);
    opt("fps_max", m.fps_max);
    opt("fps_min", m.fps_min);
    line("net_heading_change", fmt_sig(m.net_heading_change));
    out
}

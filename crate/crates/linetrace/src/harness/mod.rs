//! Closed-loop test harness: runs the full perceive-track-steer loop
//! against the simulated world, logs every frame, computes summary
//! metrics, and renders diagnostic plots. The `cli` submodule exposes
//! the same machinery as a small command-line tool.
//!
//! A run is fully determined by its configuration (including the seed):
//! with per-frame timing capture disabled, repeating a run produces
//! byte-identical logs, metrics, and plots.

pub mod cli;
pub mod config;
pub mod csvlog;
pub mod img_io;
pub mod metrics;
pub mod plots;
pub mod runner;

pub use config::{OutputParams, RunConfig, SimParams, WorldChoice};
pub use csvlog::{log_to_csv, records_from_csv};
pub use metrics::{compute_metrics, metrics_to_text, Metrics};
pub use runner::{run, run_with_frames, FrameCommand, RunLog, RunRecord, Termination};

use thiserror::Error;

use crate::detection::DetectionError;
use crate::imaging::ImagingError;
use crate::simworld::SimError;
use crate::tracking::TrackingError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("csv line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error("image file: {0}")]
    ImageFormat(String),
    #[error(transparent)]
    Imaging(#[from] ImagingError),
    #[error(transparent)]
    Detection(#[from] DetectionError),
    #[error(transparent)]
    Tracking(#[from] TrackingError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Formats a float with six significant digits, trailing zeros trimmed.
/// The output is a pure function of the value, so logs built from it are
/// reproducible byte for byte.
pub(crate) fn fmt_sig(value: f64) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    if !value.is_finite() {
        return value.to_string();
    }
    let magnitude = value.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    let mut s = format!("{value:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::fmt_sig;

    #[test]
    fn six_significant_digits_round_trip_typical_values() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(1.25), "1.25");
        assert_eq!(fmt_sig(12.300000), "12.3");
        assert_eq!(fmt_sig(12345.678), "12345.7");
        assert_eq!(fmt_sig(-0.000123456), "-0.000123456");
        assert_eq!(fmt_sig(0.015030912), "0.0150309");
        assert_eq!(fmt_sig(319.5), "319.5");
        assert_eq!(fmt_sig(-3.0), "-3");
        assert_eq!(fmt_sig(100.0), "100");
    }
}

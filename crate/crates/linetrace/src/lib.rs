//! Vision-based line following for a small simulated indoor MAV.
//!
//! The crate implements the full perception-to-actuation loop of a drone
//! that follows a colored guide line painted on a warehouse floor:
//!
//! - [`imaging`]: RGB to HSV conversion, color-band thresholding, and
//!   binary morphology used to segment the line from the floor.
//! - [`detection`]: Canny edge extraction and a progressive probabilistic
//!   Hough transform that turn the mask into line segments and a centroid.
//! - [`tracking`]: a linear Kalman filter that smooths the raw centroid and
//!   coasts through short detection dropouts.
//! - [`navigation`]: a bang-bang steering law with a deadband plus a
//!   proportional altitude hold, mapping tracked centroids to velocity
//!   setpoints.
//! - [`simworld`]: the synthetic warehouse: world geometry, first-order
//!   vehicle dynamics, and a downward-facing pinhole camera renderer.
//! - [`harness`]: the lockstep run loop, run configuration, CSV logging,
//!   metrics, plot export, and the command line entry points.
//!
//! Everything is deterministic: a run is fully reproducible from its
//! configuration and seed. Runnable demonstrations of each stage live in
//! the crate's `examples/` directory.

pub mod detection;
pub mod harness;
pub mod imaging;
pub mod navigation;
pub mod simworld;
pub mod tracking;

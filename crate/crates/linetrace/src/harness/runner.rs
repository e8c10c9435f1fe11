//! The closed loop: render, detect, track, decide, step.
//!
//! A run has two phases. During takeoff the vehicle climbs in place
//! under the altitude law with steering pinned to zero; once the
//! altitude is within 2 cm of the target the run switches to cruise and
//! the tracked centroid drives the bang-bang controller. The run ends
//! when the vehicle has consumed the full path length and is near the
//! path's final point, or when the simulated time budget expires.

use nalgebra::Point2;

use crate::detection::{detect_line, Centroid};
use crate::harness::config::RunConfig;
use crate::harness::HarnessError;
use crate::imaging::RgbImage;
use crate::navigation::{command_to_setpoint, navigate_frame, NavCommand, VelocitySetpoint};
use crate::simworld::{add_pixel_noise, render_camera, step_dynamics, MavState, WorldSpec};
use crate::tracking::{CentroidTrack, TrackedCentroid};

/// Altitude error at which takeoff hands over to cruise.
const TAKEOFF_TOLERANCE: f64 = 0.02;
/// Arrival counts when the vehicle is within this many line widths of
/// the final path point. Matches the lateral slack the bang-bang
/// steering itself tolerates, so a run that tracked the whole path is
/// not denied completion over a parked deadband offset.
const ARRIVAL_RADIUS_LINE_WIDTHS: f64 = 2.0;

/// What the vehicle was told to do on one frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameCommand {
    /// Climbing to the target altitude; steering pinned to zero.
    Takeoff,
    /// Cruise-phase steering decision.
    Nav(NavCommand),
}

impl std::fmt::Display for FrameCommand {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FrameCommand::Takeoff => f.write_str("takeoff"),
            FrameCommand::Nav(cmd) => cmd.fmt(f),
        }
    }
}

/// Why the run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Reached the end of the path after covering it.
    Completed,
    /// Ran out of simulated time.
    MaxDuration,
}

impl std::fmt::Display for Termination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Termination::Completed => f.write_str("completed"),
            Termination::MaxDuration => f.write_str("max duration reached"),
        }
    }
}

/// Everything observed on one frame. Pose fields describe the state the
/// camera frame was rendered from; `vx`, `yaw_rate` and `vz` are the
/// setpoint chosen on that frame.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub frame: u64,
    /// Simulated time of the frame, seconds.
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub yaw: f64,
    /// Raw detected centroid, if the detector fired.
    pub raw: Option<Centroid>,
    /// Filtered centroid, once a track exists.
    pub kf: Option<(f64, f64)>,
    /// Whether the track was valid when the decision was made.
    pub valid: bool,
    pub command: FrameCommand,
    pub vx: f64,
    pub yaw_rate: f64,
    pub vz: f64,
    /// Detection wall time in seconds; absent when timing is off.
    pub detect_time: Option<f64>,
}

/// Complete closed-loop run: per-frame records plus how it ended.
#[derive(Debug, Clone, PartialEq)]
pub struct RunLog {
    pub world_name: String,
    pub records: Vec<RunRecord>,
    pub termination: Termination,
    /// Frame index of the first cruise frame, if takeoff finished.
    pub cruise_start: Option<u64>,
    /// Running maximum of path distance covered, meters.
    pub traversed: f64,
    pub final_state: MavState,
}

impl RunLog {
    pub fn completed(&self) -> bool {
        self.termination == Termination::Completed
    }
}

fn frame_noise_seed(master: u64, frame: u64) -> u64 {
    master.wrapping_add(frame.wrapping_mul(0x9E3779B97F4A7C15))
}

/// Runs the closed loop in `world` under `config` until completion or
/// the time budget. The world is passed explicitly so callers decide how
/// it is obtained (built-in or file) and can reuse it for metrics.
pub fn run(world: &WorldSpec, config: &RunConfig) -> Result<RunLog, HarnessError> {
    run_with_frames(world, config, |_, _| Ok(()))
}

/// [`run`], additionally handing every rendered camera frame (after
/// noise) to `on_frame`. This is how frame dumps are implemented without
/// buffering a run's worth of images; an error from the callback aborts
/// the run.
pub fn run_with_frames<F>(
    world: &WorldSpec,
    config: &RunConfig,
    mut on_frame: F,
) -> Result<RunLog, HarnessError>
where
    F: FnMut(u64, &RgbImage) -> Result<(), HarnessError>,
{
    world.validate()?;
    let end_point = world.end_point().expect("validated world has elements");
    let total_length = world.length();
    let closed_loop = world.is_closed();
    let dt = config.sim.dt;

    let mut state = MavState::grounded(world.start.x, world.start.y, world.start_yaw);
    let mut track: Option<CentroidTrack> = None;
    let mut records = Vec::new();
    let mut cruise_start: Option<u64> = None;
    let mut traversed: f64 = 0.0;
    let mut termination = Termination::MaxDuration;

    let mut frame: u64 = 0;
    loop {
        let t = frame as f64 * dt;
        if t > config.sim.max_duration {
            break;
        }

        let mut image = render_camera(world, &config.camera, &state)?;
        if config.sim.pixel_noise_sigma > 0.0 {
            add_pixel_noise(
                &mut image,
                config.sim.pixel_noise_sigma,
                frame_noise_seed(config.sim.seed, frame),
            );
        }
        on_frame(frame, &image)?;

        let detection = detect_line(&image, &config.detection)?;
        let detect_time = config.outputs.timing.then_some(detection.timing);
        let raw = detection.centroid;

        // Advance the track: step an existing one, or start one on the
        // first detection (whose output is the measurement itself).
        let tracked = match (&track, raw) {
            (Some(existing), measurement) => {
                let (next, out) = existing.step(measurement)?;
                track = Some(next);
                Some(out)
            }
            (None, Some(c)) => {
                track = Some(CentroidTrack::init_from(c, &config.tracker));
                Some(TrackedCentroid { cx: c.cx, cy: c.cy, raw: Some(c), valid: true })
            }
            (None, None) => None,
        };

        if cruise_start.is_none()
            && (state.z - config.nav.target_altitude).abs() <= TAKEOFF_TOLERANCE
        {
            cruise_start = Some(frame);
        }

        let (command, setpoint) = if cruise_start.is_none() {
            // Climb in place; reuse the altitude law with zero steering.
            let vz = command_to_setpoint(NavCommand::Forward, state.z, &config.nav).vz;
            (FrameCommand::Takeoff, VelocitySetpoint { vx: 0.0, yaw_rate: 0.0, vz })
        } else {
            let fallback = TrackedCentroid { cx: 0.0, cy: 0.0, raw: None, valid: false };
            let subject = tracked.unwrap_or(fallback);
            let (cmd, sp) = navigate_frame(&subject, config.camera.width(), state.z, &config.nav);
            (FrameCommand::Nav(cmd), sp)
        };

        records.push(RunRecord {
            frame,
            t,
            x: state.x,
            y: state.y,
            z: state.z,
            yaw: state.yaw,
            raw,
            kf: tracked.map(|tc| (tc.cx, tc.cy)),
            valid: tracked.map_or(false, |tc| tc.valid),
            command,
            vx: setpoint.vx,
            yaw_rate: setpoint.yaw_rate,
            vz: setpoint.vz,
            detect_time,
        });

        if cruise_start.is_some() {
            let here = Point2::new(state.x, state.y);
            if let Some(proj) = world.project(here) {
                traversed = traversed.max(proj.along);
            }
            // Complete only once the whole path length has been consumed
            // and the vehicle is physically at the end marker. On open
            // paths the projection clamps at the final endpoint, so
            // flying through the end drives `traversed` to the full
            // length exactly. On closed loops the projection hands off
            // to the first element as the seam is crossed, which can
            // leave the high-water mark one frame of travel short; the
            // extra slack absorbs that quantization.
            let slack = if closed_loop {
                2.0 * config.nav.forward_speed * dt + 1e-9
            } else {
                1e-9
            };
            let at_end =
                (here - end_point).norm() <= ARRIVAL_RADIUS_LINE_WIDTHS * world.line_width;
            if at_end && traversed >= total_length - slack {
                termination = Termination::Completed;
                break;
            }
        }

        state = step_dynamics(&state, &setpoint, dt, config.sim.tau);
        frame += 1;
    }

    Ok(RunLog {
        world_name: world.name.clone(),
        records,
        termination,
        cruise_start,
        traversed,
        final_state: state,
    })
}

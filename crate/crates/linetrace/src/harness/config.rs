//! Run configuration: a flat `key = value` text format covering every
//! stage of the stack. All keys are optional and default to the stock
//! setup; unknown keys are errors so typos cannot silently fall back to
//! defaults. `#` lines are comments.
//!
//! ```text
//! world.env = env1            # or world.file = path/to/world.txt
//! camera.width = 640
//! camera.height = 480
//! camera.vfov_deg = 60
//! camera.forward_offset = 0.5
//! detection.hsv_lower = 18,94,140
//! detection.hsv_upper = 48,255,255
//! detection.kernel_half_width = 1
//! detection.canny_low = 50
//! detection.canny_high = 150
//! detection.canny_sigma = 1.4
//! detection.hough_rho = 1
//! detection.hough_theta_deg = 1
//! detection.hough_votes = 50
//! detection.hough_min_length = 40
//! detection.hough_max_gap = 50
//! detection.hough_seed = 4583
//! tracker.process_noise = 1
//! tracker.measurement_variance = 25
//! tracker.initial_position_variance = 100
//! tracker.initial_velocity_variance = 1000
//! tracker.max_coast = 15
//! nav.deadband_fraction = 0.15
//! nav.forward_speed = 0.05
//! nav.yaw_rate = 0.3
//! nav.search_yaw_rate = 0.2
//! nav.target_altitude = 1
//! nav.climb_gain = 1
//! nav.max_climb_rate = 0.5
//! sim.dt = 0.1
//! sim.tau = 0.3
//! sim.max_duration = 600
//! sim.pixel_noise_sigma = 0
//! sim.seed = 1
//! outputs.directory = .
//! outputs.frame_stride = 0
//! outputs.plots = on
//! outputs.timing = on
//! ```
//!
//! The tracker's frame period always follows `sim.dt`; there is no
//! separate key for it.

use std::path::{Path, PathBuf};

use crate::detection::{CannyParams, DetectionConfig, HoughParams};
use crate::harness::HarnessError;
use crate::imaging::{HsvPixel, HsvRange, StructuringElement};
use crate::navigation::NavConfig;
use crate::simworld::{build_environment, CameraModel, EnvId, WorldSpec};
use crate::tracking::TrackerConfig;

/// Which world a run takes place in.
#[derive(Debug, Clone, PartialEq)]
pub enum WorldChoice {
    BuiltIn(EnvId),
    File(PathBuf),
}

impl Default for WorldChoice {
    fn default() -> Self {
        WorldChoice::BuiltIn(EnvId::Env1)
    }
}

/// Simulation loop parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimParams {
    /// Frame period, seconds.
    pub dt: f64,
    /// Actuator lag time constant, seconds.
    pub tau: f64,
    /// Simulated time budget before the run is cut off, seconds.
    pub max_duration: f64,
    /// Std dev of camera luminance noise, intensity counts.
    pub pixel_noise_sigma: f64,
    /// Master seed for the run's noise streams.
    pub seed: u64,
}

impl Default for SimParams {
    fn default() -> Self {
        Self { dt: 0.1, tau: 0.3, max_duration: 600.0, pixel_noise_sigma: 0.0, seed: 1 }
    }
}

/// What the run writes besides the log itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputParams {
    /// Where run artifacts land unless the CLI overrides it.
    pub directory: PathBuf,
    /// Dump every Nth camera frame as a pixmap; 0 disables dumps.
    pub frame_stride: u64,
    /// Write the SVG charts alongside the log.
    pub plots: bool,
    /// Capture per-frame detection wall time. Disable for byte-identical
    /// reruns: wall-clock values are the one nondeterministic output.
    pub timing: bool,
}

impl Default for OutputParams {
    fn default() -> Self {
        Self { directory: PathBuf::from("."), frame_stride: 0, plots: true, timing: true }
    }
}

/// Full configuration of a closed-loop run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunConfig {
    pub world: WorldChoice,
    pub camera: CameraModel,
    pub detection: DetectionConfig,
    pub tracker: TrackerConfig,
    pub nav: NavConfig,
    pub sim: SimParams,
    pub outputs: OutputParams,
}

impl RunConfig {
    /// Parses the flat text format. Every key is optional.
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        Parser::new(text)?.finish()
    }

    /// Reads and parses a configuration file.
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Materializes the world this configuration runs in. World files
    /// are resolved relative to the current directory.
    pub fn resolve_world(&self) -> Result<WorldSpec, HarnessError> {
        match &self.world {
            WorldChoice::BuiltIn(env) => Ok(build_environment(*env)),
            WorldChoice::File(path) => {
                let text = std::fs::read_to_string(path)?;
                Ok(WorldSpec::from_world_file(&text)?)
            }
        }
    }
}

fn config_err(line: usize, message: impl Into<String>) -> HarnessError {
    HarnessError::Config { line, message: message.into() }
}

/// Raw key-value pairs separated from the typed assembly so every value
/// error can carry its line number.
struct Parser {
    world: WorldChoice,
    camera: (u32, u32, f64, f64),
    hsv_lower: HsvPixel,
    hsv_upper: HsvPixel,
    kernel_half_width: u32,
    canny: (f64, f64, f64),
    hough: (f64, f64, u32, u32, u32, u64),
    tracker: TrackerConfig,
    nav: NavConfig,
    sim: SimParams,
    outputs: OutputParams,
    line: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, HarnessError> {
        let detection = DetectionConfig::default();
        let camera = CameraModel::default();
        let mut parser = Self {
            world: WorldChoice::default(),
            camera: (
                camera.width(),
                camera.height(),
                camera.vfov().to_degrees(),
                camera.forward_offset(),
            ),
            hsv_lower: detection.band.lower(),
            hsv_upper: detection.band.upper(),
            kernel_half_width: detection.kernel.half_width(),
            canny: (detection.canny.low(), detection.canny.high(), detection.canny.sigma()),
            hough: (
                detection.hough.rho_resolution(),
                detection.hough.theta_resolution().to_degrees(),
                detection.hough.vote_threshold(),
                detection.hough.min_line_length(),
                detection.hough.max_line_gap(),
                detection.hough.seed(),
            ),
            tracker: TrackerConfig::default(),
            nav: NavConfig::default(),
            sim: SimParams::default(),
            outputs: OutputParams::default(),
            line: 0,
        };
        let mut seen: Vec<String> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            parser.line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed
                .split_once('=')
                .ok_or_else(|| config_err(parser.line, "expected `key = value`"))?;
            let key = key.trim();
            let value = value.trim();
            if seen.iter().any(|k| k == key) {
                return Err(config_err(parser.line, format!("duplicate key `{key}`")));
            }
            seen.push(key.to_string());
            parser.apply(key, value)?;
        }
        Ok(parser)
    }

    fn f64(&self, value: &str) -> Result<f64, HarnessError> {
        value
            .parse()
            .map_err(|_| config_err(self.line, format!("`{value}` is not a number")))
    }

    fn u32(&self, value: &str) -> Result<u32, HarnessError> {
        value
            .parse()
            .map_err(|_| config_err(self.line, format!("`{value}` is not a nonnegative integer")))
    }

    fn u64(&self, value: &str) -> Result<u64, HarnessError> {
        value
            .parse()
            .map_err(|_| config_err(self.line, format!("`{value}` is not a nonnegative integer")))
    }

    fn toggle(&self, key: &str, value: &str) -> Result<bool, HarnessError> {
        match value {
            "on" => Ok(true),
            "off" => Ok(false),
            other => Err(config_err(
                self.line,
                format!("{key} must be on or off, got `{other}`"),
            )),
        }
    }

    fn hsv(&self, value: &str) -> Result<HsvPixel, HarnessError> {
        let parts: Vec<&str> = value.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(config_err(self.line, format!("expected h,s,v, got {} values", parts.len())));
        }
        let mut hsv = [0u8; 3];
        for (slot, p) in hsv.iter_mut().zip(&parts) {
            *slot = p
                .parse()
                .map_err(|_| config_err(self.line, format!("`{p}` is not in 0..=255")))?;
        }
        Ok(HsvPixel { h: hsv[0], s: hsv[1], v: hsv[2] })
    }

    fn apply(&mut self, key: &str, value: &str) -> Result<(), HarnessError> {
        match key {
            "world.env" => {
                let env: EnvId = value
                    .parse()
                    .map_err(|e| config_err(self.line, format!("{e}")))?;
                self.world = WorldChoice::BuiltIn(env);
            }
            "world.file" => self.world = WorldChoice::File(PathBuf::from(value)),
            "camera.width" => self.camera.0 = self.u32(value)?,
            "camera.height" => self.camera.1 = self.u32(value)?,
            "camera.vfov_deg" => self.camera.2 = self.f64(value)?,
            "camera.forward_offset" => self.camera.3 = self.f64(value)?,
            "detection.hsv_lower" => self.hsv_lower = self.hsv(value)?,
            "detection.hsv_upper" => self.hsv_upper = self.hsv(value)?,
            "detection.kernel_half_width" => self.kernel_half_width = self.u32(value)?,
            "detection.canny_low" => self.canny.0 = self.f64(value)?,
            "detection.canny_high" => self.canny.1 = self.f64(value)?,
            "detection.canny_sigma" => self.canny.2 = self.f64(value)?,
            "detection.hough_rho" => self.hough.0 = self.f64(value)?,
            "detection.hough_theta_deg" => self.hough.1 = self.f64(value)?,
            "detection.hough_votes" => self.hough.2 = self.u32(value)?,
            "detection.hough_min_length" => self.hough.3 = self.u32(value)?,
            "detection.hough_max_gap" => self.hough.4 = self.u32(value)?,
            "detection.hough_seed" => self.hough.5 = self.u64(value)?,
            "tracker.process_noise" => self.tracker.process_noise = self.f64(value)?,
            "tracker.measurement_variance" => self.tracker.measurement_variance = self.f64(value)?,
            "tracker.initial_position_variance" => {
                self.tracker.initial_position_variance = self.f64(value)?
            }
            "tracker.initial_velocity_variance" => {
                self.tracker.initial_velocity_variance = self.f64(value)?
            }
            "tracker.max_coast" => self.tracker.max_coast = self.u32(value)?,
            "nav.deadband_fraction" => self.nav.deadband_fraction = self.f64(value)?,
            "nav.forward_speed" => self.nav.forward_speed = self.f64(value)?,
            "nav.yaw_rate" => self.nav.yaw_rate = self.f64(value)?,
            "nav.search_yaw_rate" => self.nav.search_yaw_rate = self.f64(value)?,
            "nav.target_altitude" => self.nav.target_altitude = self.f64(value)?,
            "nav.climb_gain" => self.nav.climb_gain = self.f64(value)?,
            "nav.max_climb_rate" => self.nav.max_climb_rate = self.f64(value)?,
            "sim.dt" => {
                let dt = self.f64(value)?;
                if !(dt > 0.0) || !dt.is_finite() {
                    return Err(config_err(self.line, format!("sim.dt must be positive, got {dt}")));
                }
                self.sim.dt = dt;
            }
            "sim.tau" => self.sim.tau = self.f64(value)?,
            "sim.max_duration" => self.sim.max_duration = self.f64(value)?,
            "sim.pixel_noise_sigma" => self.sim.pixel_noise_sigma = self.f64(value)?,
            "sim.seed" => self.sim.seed = self.u64(value)?,
            "outputs.directory" => self.outputs.directory = PathBuf::from(value),
            "outputs.frame_stride" => self.outputs.frame_stride = self.u64(value)?,
            "outputs.plots" => self.outputs.plots = self.toggle(key, value)?,
            "outputs.timing" => self.outputs.timing = self.toggle(key, value)?,
            other => return Err(config_err(self.line, format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Assembles the typed configuration, funneling the stage
    /// constructors' validation errors through the config error type.
    fn finish(self) -> Result<RunConfig, HarnessError> {
        let wrap = |e: &dyn std::fmt::Display| config_err(0, format!("{e}"));
        let camera = CameraModel::new(self.camera.0, self.camera.1, self.camera.2.to_radians())
            .and_then(|c| c.with_forward_offset(self.camera.3))
            .map_err(|e| wrap(&e))?;
        let band = HsvRange::new(self.hsv_lower, self.hsv_upper).map_err(|e| wrap(&e))?;
        let kernel = StructuringElement::new(self.kernel_half_width).map_err(|e| wrap(&e))?;
        let canny =
            CannyParams::new(self.canny.0, self.canny.1, self.canny.2).map_err(|e| wrap(&e))?;
        let hough = HoughParams::new(
            self.hough.0,
            self.hough.1.to_radians(),
            self.hough.2,
            self.hough.3,
            self.hough.4,
            self.hough.5,
        )
        .map_err(|e| wrap(&e))?;
        Ok(RunConfig {
            world: self.world,
            camera,
            detection: DetectionConfig { band, kernel, canny, hough },
            tracker: TrackerConfig { dt: self.sim.dt, ..self.tracker },
            nav: self.nav,
            sim: self.sim,
            outputs: self.outputs,
        })
    }
}

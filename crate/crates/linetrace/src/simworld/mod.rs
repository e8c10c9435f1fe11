//! Simulated warehouse: a colored guide line on a flat floor, a point
//! mass vehicle with lagged velocity control, and a downward camera.
//!
//! The world lives in a planar frame where heading `psi` moves the
//! vehicle along `(cos psi, sin psi)` and a positive yaw rate turns it
//! toward `(-sin psi, cos psi)`, i.e. nose-right. Two ready-made
//! environments ship with the crate: `env1`, an L-shaped polyline with
//! three right-angle corners, and `env2`, a closed oval of four tangent
//! circular arcs traversed as one full left-hand loop.

mod camera;
mod dynamics;
mod path;
mod worldfile;

pub use camera::{add_pixel_noise, render_camera, CameraModel};
pub use dynamics::{step_dynamics, wrap_angle, MavState};
pub use path::{path_length, project_path, ArcDirection, PathElement, PathProjection};

use std::fmt;
use std::str::FromStr;

use nalgebra::Point2;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("camera height {z} m is too low to render (must exceed 0.01 m)")]
    CameraTooLow { z: f64 },
    #[error("invalid camera: {0}")]
    InvalidCamera(String),
    #[error("invalid world: {0}")]
    InvalidWorld(String),
    #[error("unknown environment `{0}` (expected env1 or env2)")]
    UnknownEnvironment(String),
    #[error("world file line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Complete description of a simulated floor: the guide path, its paint,
/// and where the vehicle starts.
#[derive(Debug, Clone, PartialEq)]
pub struct WorldSpec {
    pub name: String,
    /// Painted line width in meters.
    pub line_width: f64,
    pub line_color: (u8, u8, u8),
    pub floor_color: (u8, u8, u8),
    /// Plot viewport as `(min_x, min_y, max_x, max_y)`.
    pub bounds: (f64, f64, f64, f64),
    /// Vehicle start position, on the path.
    pub start: Point2<f64>,
    /// Vehicle start heading, radians.
    pub start_yaw: f64,
    /// Guide path in traversal order.
    pub elements: Vec<PathElement>,
}

impl WorldSpec {
    pub fn validate(&self) -> Result<(), SimError> {
        if self.elements.is_empty() {
            return Err(SimError::InvalidWorld("path has no elements".into()));
        }
        if !(self.line_width > 0.0) || !self.line_width.is_finite() {
            return Err(SimError::InvalidWorld(format!(
                "line width must be positive and finite, got {}",
                self.line_width
            )));
        }
        if self.bounds.0 >= self.bounds.2 || self.bounds.1 >= self.bounds.3 {
            return Err(SimError::InvalidWorld(format!("bounds {:?} are empty", self.bounds)));
        }
        for element in &self.elements {
            if let PathElement::Arc { radius, sweep, .. } = element {
                if !(*radius > 0.0) || *sweep < 0.0 {
                    return Err(SimError::InvalidWorld(format!(
                        "arc must have positive radius and nonnegative sweep, got r = {radius}, sweep = {sweep}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Total path length in meters.
    pub fn length(&self) -> f64 {
        path_length(&self.elements)
    }

    /// Closest approach of `p` to the guide path.
    pub fn project(&self, p: Point2<f64>) -> Option<PathProjection> {
        project_path(&self.elements, p)
    }

    /// Distance from `p` to the path centerline (infinite if empty).
    pub fn cross_track(&self, p: Point2<f64>) -> f64 {
        self.project(p).map_or(f64::INFINITY, |proj| proj.distance)
    }

    /// Last point of the path.
    pub fn end_point(&self) -> Option<Point2<f64>> {
        self.elements.last().map(PathElement::end_point)
    }

    /// True when the path returns to its starting point (a loop). The
    /// tolerance absorbs rounding in arc endpoint arithmetic; no real
    /// path element is anywhere near this short.
    pub fn is_closed(&self) -> bool {
        match (self.elements.first(), self.end_point()) {
            (Some(first), Some(end)) => (first.point_at(0.0) - end).norm() < 1e-6,
            _ => false,
        }
    }

    /// Serializes to the flat `key = value` world file format.
    pub fn to_world_file(&self) -> String {
        worldfile::emit(self)
    }

    /// Parses the flat `key = value` world file format.
    pub fn from_world_file(text: &str) -> Result<Self, SimError> {
        worldfile::parse(text)
    }
}

/// Built-in environment selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvId {
    Env1,
    Env2,
}

impl fmt::Display for EnvId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnvId::Env1 => "env1",
            EnvId::Env2 => "env2",
        })
    }
}

impl FromStr for EnvId {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "env1" => Ok(EnvId::Env1),
            "env2" => Ok(EnvId::Env2),
            other => Err(SimError::UnknownEnvironment(other.to_string())),
        }
    }
}

/// Default paint: a 15 cm yellow line on a mid-gray floor.
const LINE_WIDTH: f64 = 0.15;
const LINE_COLOR: (u8, u8, u8) = (255, 255, 0);
const FLOOR_COLOR: (u8, u8, u8) = (96, 96, 96);

/// Builds one of the built-in worlds.
///
/// `env1` is an open polyline with three right-angle corners (two right
/// turns, then a left): 11.5 m in total. `env2` is a closed oval made of
/// two large arcs (radius 3) and two small arcs (radius 1.5) joined
/// tangentially; the vehicle starts on the top apex heading along +x and
/// loops once, turning left the whole way.
pub fn build_environment(env: EnvId) -> WorldSpec {
    match env {
        EnvId::Env1 => {
            let waypoints = [
                Point2::new(0.0, 0.0),
                Point2::new(4.0, 0.0),
                Point2::new(4.0, 2.5),
                Point2::new(1.0, 2.5),
                Point2::new(1.0, 4.5),
            ];
            let elements = waypoints
                .windows(2)
                .map(|w| PathElement::Segment { start: w[0], end: w[1] })
                .collect();
            WorldSpec {
                name: "env1".into(),
                line_width: LINE_WIDTH,
                line_color: LINE_COLOR,
                floor_color: FLOOR_COLOR,
                bounds: (-1.0, -1.0, 5.0, 5.5),
                start: waypoints[0],
                start_yaw: 0.0,
                elements,
            }
        }
        EnvId::Env2 => {
            use std::f64::consts::{FRAC_PI_2, PI};
            // Join angle of the 3-4-5 tangency between a radius-3 arc
            // and a radius-1.5 arc whose centers sit 1.5 apart.
            let d = 4.0f64.atan2(3.0);
            let dp = 3.0f64.atan2(4.0);
            let cw = ArcDirection::Cw;
            let arc = |cx: f64, cy: f64, radius: f64, start_angle: f64, sweep: f64| {
                PathElement::Arc {
                    center: Point2::new(cx, cy),
                    radius,
                    start_angle,
                    sweep,
                    direction: cw,
                }
            };
            // The start pose splits the top arc in two, so the loop is
            // five elements long even though the oval has four arcs.
            let elements = vec![
                arc(0.0, -1.2, 3.0, FRAC_PI_2, dp),
                arc(0.9, 0.0, 1.5, d, 2.0 * d),
                arc(0.0, 1.2, 3.0, -d, 2.0 * dp),
                arc(-0.9, 0.0, 1.5, d - PI, 2.0 * d),
                arc(0.0, -1.2, 3.0, PI - d, dp),
            ];
            WorldSpec {
                name: "env2".into(),
                line_width: LINE_WIDTH,
                line_color: LINE_COLOR,
                floor_color: FLOOR_COLOR,
                bounds: (-3.4, -2.8, 3.4, 2.8),
                start: Point2::new(0.0, 1.8),
                start_yaw: 0.0,
                elements,
            }
        }
    }
}

//! Downward-looking pinhole camera over a flat floor.
//!
//! The floor is at height zero and the optical axis points straight
//! down, so every pixel maps to a floor point by pure scaling: a camera
//! at height `z` with vertical field of view `vfov` sees a ground patch
//! `2 z tan(vfov / 2)` meters tall, i.e. `s = 2 z tan(vfov / 2) / height`
//! meters per pixel. The camera is mounted `forward_offset` meters ahead
//! of the yaw axis (zero puts it at the vehicle center). Image "up" is
//! the vehicle's forward axis and image "right" is the vehicle's right,
//! so pixel `(px, py)` lands at
//!
//! ```text
//! P = pos + fwd * (forward_offset + s * (height/2 - py - 0.5))
//!         + right * s * (px + 0.5 - width/2)
//! ```
//!
//! with `fwd = (cos yaw, sin yaw)` and `right = (-sin yaw, cos yaw)`.
//! A pixel is painted line-colored when its floor point lies within half
//! a line width of the path centerline, floor-colored otherwise.
//!
//! The forward mount matters for control: it converts the image cue into
//! a preview of the path ahead. When the vehicle yaws in place the
//! footprint sweeps along a circle of radius `forward_offset` around the
//! vehicle, so after a 90 degree turn at a corner the view lands on the
//! new leg and the turn command releases near the right heading. A
//! centered camera instead keeps the already-flown line in view behind
//! the vehicle, which biases the cue toward straight-ahead until the
//! vehicle has overrun the corner, and every turn then overshoots.

use nalgebra::{Point2, Vector2};

use crate::imaging::RgbImage;
use crate::simworld::{MavState, PathElement, SimError, WorldSpec};

/// Altitudes at or below this render nothing useful: the footprint
/// degenerates and the vehicle is effectively on the ground.
const MIN_RENDER_HEIGHT: f64 = 0.01;

/// Pinhole camera intrinsics and mount position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraModel {
    width: u32,
    height: u32,
    vfov: f64,
    forward_offset: f64,
}

impl CameraModel {
    /// `vfov` is the full vertical field of view in radians, in (0, pi).
    /// The camera is mounted on the yaw axis; use
    /// [`with_forward_offset`](Self::with_forward_offset) to move it.
    pub fn new(width: u32, height: u32, vfov: f64) -> Result<Self, SimError> {
        if width == 0 || height == 0 {
            return Err(SimError::InvalidCamera(format!(
                "resolution {width}x{height} has a zero dimension"
            )));
        }
        if !(vfov > 0.0 && vfov < std::f64::consts::PI) {
            return Err(SimError::InvalidCamera(format!(
                "vertical field of view {vfov} rad is outside (0, pi)"
            )));
        }
        Ok(Self { width, height, vfov, forward_offset: 0.0 })
    }

    /// Moves the mount `offset` meters ahead of the yaw axis (still
    /// looking straight down). Must be finite and non-negative.
    pub fn with_forward_offset(mut self, offset: f64) -> Result<Self, SimError> {
        if !(offset.is_finite() && offset >= 0.0) {
            return Err(SimError::InvalidCamera(format!(
                "forward offset {offset} m must be finite and non-negative"
            )));
        }
        self.forward_offset = offset;
        Ok(self)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn vfov(&self) -> f64 {
        self.vfov
    }

    pub fn forward_offset(&self) -> f64 {
        self.forward_offset
    }

    /// Ground sampling distance (meters per pixel) at height `z`.
    pub fn meters_per_pixel(&self, z: f64) -> f64 {
        2.0 * z * (self.vfov / 2.0).tan() / self.height as f64
    }
}

impl Default for CameraModel {
    /// 640x480 with a 60 degree vertical field of view, mounted half a
    /// meter ahead of the yaw axis.
    fn default() -> Self {
        Self {
            width: 640,
            height: 480,
            vfov: std::f64::consts::FRAC_PI_3,
            forward_offset: 0.5,
        }
    }
}

/// Per-element paint test, precomputed once per frame. Elements first
/// reject by padded bounding box (and, for arcs, by a squared-radius
/// annulus) so the per-pixel cost stays at a few comparisons.
enum Painted {
    Segment {
        bbox: (f64, f64, f64, f64),
        start: Point2<f64>,
        dir: Vector2<f64>,
        len2: f64,
        half2: f64,
    },
    Arc {
        bbox: (f64, f64, f64, f64),
        center: Point2<f64>,
        inner2: f64,
        outer2: f64,
        start_angle: f64,
        sweep: f64,
        clockwise: bool,
        ends: [Point2<f64>; 2],
        half2: f64,
    },
}

impl Painted {
    fn build(element: &PathElement, half_width: f64) -> Self {
        let bbox = element.bounds(half_width);
        let half2 = half_width * half_width;
        match *element {
            PathElement::Segment { start, end } => {
                let dir = end - start;
                Painted::Segment { bbox, start, dir, len2: dir.norm_squared(), half2 }
            }
            PathElement::Arc { center, radius, start_angle, sweep, direction } => {
                let inner = (radius - half_width).max(0.0);
                Painted::Arc {
                    bbox,
                    center,
                    inner2: inner * inner,
                    outer2: (radius + half_width) * (radius + half_width),
                    start_angle,
                    sweep,
                    clockwise: matches!(direction, super::ArcDirection::Cw),
                    ends: [element.point_at(0.0), element.point_at(1.0)],
                    half2,
                }
            }
        }
    }

    fn hit(&self, p: Point2<f64>) -> bool {
        match self {
            Painted::Segment { bbox, start, dir, len2, half2 } => {
                if p.x < bbox.0 || p.x > bbox.2 || p.y < bbox.1 || p.y > bbox.3 {
                    return false;
                }
                let rel = p - start;
                let t = if *len2 == 0.0 { 0.0 } else { (rel.dot(dir) / len2).clamp(0.0, 1.0) };
                (rel - dir * t).norm_squared() <= *half2
            }
            Painted::Arc {
                bbox,
                center,
                inner2,
                outer2,
                start_angle,
                sweep,
                clockwise,
                ends,
                half2,
            } => {
                if p.x < bbox.0 || p.x > bbox.2 || p.y < bbox.1 || p.y > bbox.3 {
                    return false;
                }
                let rel = p - center;
                let d2 = rel.norm_squared();
                if d2 < *inner2 || d2 > *outer2 {
                    return false;
                }
                let angle = rel.y.atan2(rel.x);
                let tau = std::f64::consts::TAU;
                let delta = if *clockwise {
                    (start_angle - angle).rem_euclid(tau)
                } else {
                    (angle - start_angle).rem_euclid(tau)
                };
                if delta <= *sweep {
                    return true;
                }
                ends.iter().any(|e| (p - e).norm_squared() <= *half2)
            }
        }
    }
}

/// Renders the camera view of `world` from `state`. Same inputs always
/// produce the same bytes.
pub fn render_camera(
    world: &WorldSpec,
    camera: &CameraModel,
    state: &MavState,
) -> Result<RgbImage, SimError> {
    world.validate()?;
    if state.z <= MIN_RENDER_HEIGHT {
        return Err(SimError::CameraTooLow { z: state.z });
    }
    let half_width = world.line_width / 2.0;
    let painted: Vec<Painted> =
        world.elements.iter().map(|e| Painted::build(e, half_width)).collect();

    let (w, h) = (camera.width as usize, camera.height as usize);
    let s = camera.meters_per_pixel(state.z);
    let fwd = Vector2::new(state.yaw.cos(), state.yaw.sin());
    let right = Vector2::new(-state.yaw.sin(), state.yaw.cos());
    let pos = Point2::new(state.x, state.y) + fwd * camera.forward_offset;
    let step = right * s;

    let mut image = RgbImage::filled(camera.width, camera.height, world.floor_color)
        .expect("camera dimensions are validated nonzero");
    let data = image.as_mut_raw();
    for py in 0..h {
        let u = s * (h as f64 / 2.0 - py as f64 - 0.5);
        let v0 = s * (0.5 - w as f64 / 2.0);
        // March the row: each pixel is one vector add away from the last.
        let mut p = pos + fwd * u + right * v0;
        let row = py * w * 3;
        for px in 0..w {
            if painted.iter().any(|e| e.hit(p)) {
                let at = row + px * 3;
                data[at] = world.line_color.0;
                data[at + 1] = world.line_color.1;
                data[at + 2] = world.line_color.2;
            }
            p += step;
        }
    }
    Ok(image)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Adds deterministic zero-mean Gaussian luminance noise with the given
/// standard deviation (in intensity counts) to every pixel. The noise
/// value depends only on `seed` and the pixel index, so equal seeds give
/// equal images.
pub fn add_pixel_noise(image: &mut RgbImage, sigma: f64, seed: u64) {
    if sigma <= 0.0 {
        return;
    }
    let data = image.as_mut_raw();
    for i in 0..data.len() / 3 {
        let h1 = splitmix64(seed ^ (i as u64).wrapping_mul(0xA24BAED4963EE407));
        let h2 = splitmix64(h1);
        // Box-Muller on two (0, 1) uniforms from the hash stream.
        let u1 = ((h1 >> 11) as f64 + 0.5) / (1u64 << 53) as f64;
        let u2 = ((h2 >> 11) as f64 + 0.5) / (1u64 << 53) as f64;
        let n = sigma * (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos();
        for c in 0..3 {
            let at = i * 3 + c;
            data[at] = (data[at] as f64 + n).round().clamp(0.0, 255.0) as u8;
        }
    }
}

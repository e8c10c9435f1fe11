//! Point-mass vehicle model with first-order actuator lag.
//!
//! Commanded body velocities are not attained instantly: each channel
//! relaxes toward its setpoint with time constant `tau`, discretized as
//! `v += alpha * (cmd - v)` with `alpha = min(dt / tau, 1)`. The pose
//! then advances by one semi-implicit Euler step: position moves along
//! the heading held at the start of the step, the heading integrates the
//! new yaw rate and wraps into `(-pi, pi]`, and altitude never drops
//! below the floor.

use crate::navigation::VelocitySetpoint;

/// Vehicle pose and attained body velocities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MavState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    /// Heading, radians in `(-pi, pi]`; the vehicle moves along
    /// `(cos yaw, sin yaw)` and a positive yaw rate turns right.
    pub yaw: f64,
    /// Attained forward speed (m/s).
    pub vx: f64,
    /// Attained yaw rate (rad/s).
    pub yaw_rate: f64,
    /// Attained climb rate (m/s).
    pub vz: f64,
}

impl MavState {
    /// Grounded start pose: resting just above the floor so the camera
    /// has nonzero height from the first frame.
    pub fn grounded(x: f64, y: f64, yaw: f64) -> Self {
        Self { x, y, z: 0.05, yaw: wrap_angle(yaw), vx: 0.0, yaw_rate: 0.0, vz: 0.0 }
    }
}

/// Normalizes an angle into `(-pi, pi]`. Angles already in range pass
/// through bit-identically.
pub fn wrap_angle(angle: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    if angle > -PI && angle <= PI {
        return angle;
    }
    PI - (PI - angle).rem_euclid(TAU)
}

/// Advances the vehicle by one step of length `dt` toward `setpoint`.
/// `tau <= 0` means no lag: commands are attained immediately.
pub fn step_dynamics(state: &MavState, setpoint: &VelocitySetpoint, dt: f64, tau: f64) -> MavState {
    let alpha = if tau <= 0.0 { 1.0 } else { (dt / tau).min(1.0) };
    let vx = state.vx + alpha * (setpoint.vx - state.vx);
    let yaw_rate = state.yaw_rate + alpha * (setpoint.yaw_rate - state.yaw_rate);
    let vz = state.vz + alpha * (setpoint.vz - state.vz);

    let x = state.x + vx * state.yaw.cos() * dt;
    let y = state.y + vx * state.yaw.sin() * dt;
    let yaw = wrap_angle(state.yaw + yaw_rate * dt);
    let z = (state.z + vz * dt).max(0.0);

    MavState { x, y, z, yaw, vx, yaw_rate, vz }
}

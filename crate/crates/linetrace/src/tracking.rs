//! Kalman smoothing of the detected line centroid.
//!
//! A standard linear filter, split into the usual two halves:
//!
//! - time update: `x- = A x + B u`, `P- = A P A' + Q`
//! - measurement update: `K = P- H' (H P- H' + R)^-1`,
//!   `x = x- + K (z - H x-)`, `P = (I - K H) P-`, re-symmetrized as
//!   `(P + P') / 2` to keep round-off from skewing the covariance.
//!
//! [`CentroidTrack`] wraps the filter with a constant-velocity model over
//! state `(cx, cy, vx, vy)`. Frames without a detection propagate the
//! prediction unchanged; once the number of consecutive misses exceeds
//! `max_coast`, the track reports itself invalid until a measurement
//! arrives again.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::detection::Centroid;

#[derive(Debug, Error, PartialEq)]
pub enum TrackingError {
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error("innovation covariance is singular")]
    SingularInnovation,
}

/// Time-invariant linear system matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct KalmanModel {
    a: DMatrix<f64>,
    b: DVector<f64>,
    h: DMatrix<f64>,
    q: DMatrix<f64>,
    r: DMatrix<f64>,
}

impl KalmanModel {
    /// `a` is n x n, `b` n x 1, `h` m x n, `q` n x n, `r` m x m.
    pub fn new(
        a: DMatrix<f64>,
        b: DVector<f64>,
        h: DMatrix<f64>,
        q: DMatrix<f64>,
        r: DMatrix<f64>,
    ) -> Result<Self, TrackingError> {
        let n = a.nrows();
        let m = h.nrows();
        if a.ncols() != n {
            return Err(mismatch(format!("A must be square, got {}x{}", a.nrows(), a.ncols())));
        }
        if b.nrows() != n {
            return Err(mismatch(format!("B must be {n}x1, got {}x1", b.nrows())));
        }
        if h.ncols() != n {
            return Err(mismatch(format!("H must be {m}x{n}, got {}x{}", h.nrows(), h.ncols())));
        }
        if q.shape() != (n, n) {
            return Err(mismatch(format!("Q must be {n}x{n}, got {}x{}", q.nrows(), q.ncols())));
        }
        if r.shape() != (m, m) {
            return Err(mismatch(format!("R must be {m}x{m}, got {}x{}", r.nrows(), r.ncols())));
        }
        Ok(Self { a, b, h, q, r })
    }

    pub fn state_dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn measurement_dim(&self) -> usize {
        self.h.nrows()
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn h(&self) -> &DMatrix<f64> {
        &self.h
    }

    pub fn q(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn r(&self) -> &DMatrix<f64> {
        &self.r
    }
}

fn mismatch(context: String) -> TrackingError {
    TrackingError::DimensionMismatch { context }
}

/// Filter state: posterior and prior estimate with covariances, plus the
/// gain of the latest measurement update.
#[derive(Debug, Clone, PartialEq)]
pub struct KalmanState {
    x: DVector<f64>,
    p: DMatrix<f64>,
    x_prior: DVector<f64>,
    p_prior: DMatrix<f64>,
    gain: Option<DMatrix<f64>>,
}

impl KalmanState {
    pub fn new(x: DVector<f64>, p: DMatrix<f64>) -> Result<Self, TrackingError> {
        let n = x.nrows();
        if p.shape() != (n, n) {
            return Err(mismatch(format!("P must be {n}x{n}, got {}x{}", p.nrows(), p.ncols())));
        }
        Ok(Self { x: x.clone(), p: p.clone(), x_prior: x, p_prior: p, gain: None })
    }

    pub fn x(&self) -> &DVector<f64> {
        &self.x
    }

    pub fn p(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn x_prior(&self) -> &DVector<f64> {
        &self.x_prior
    }

    pub fn p_prior(&self) -> &DMatrix<f64> {
        &self.p_prior
    }

    pub fn gain(&self) -> Option<&DMatrix<f64>> {
        self.gain.as_ref()
    }
}

/// Time update: propagates the posterior into a new prior, leaving the
/// posterior fields at their predicted values until [`update`] runs.
pub fn predict(state: &KalmanState, model: &KalmanModel, u: f64) -> Result<KalmanState, TrackingError> {
    let n = model.state_dim();
    if state.x.nrows() != n {
        return Err(mismatch(format!("state has {} rows, model expects {n}", state.x.nrows())));
    }
    let x_prior = &model.a * &state.x + &model.b * u;
    let p_prior = &model.a * &state.p * model.a.transpose() + &model.q;
    Ok(KalmanState {
        x: x_prior.clone(),
        p: p_prior.clone(),
        x_prior,
        p_prior,
        gain: state.gain.clone(),
    })
}

/// Inverse of the innovation covariance: closed form for 1x1 and 2x2,
/// general inversion beyond that.
fn invert_innovation(s: &DMatrix<f64>) -> Result<DMatrix<f64>, TrackingError> {
    match s.nrows() {
        1 => {
            let v = s[(0, 0)];
            if v.abs() < f64::EPSILON {
                return Err(TrackingError::SingularInnovation);
            }
            Ok(DMatrix::from_element(1, 1, 1.0 / v))
        }
        2 => {
            let det = s[(0, 0)] * s[(1, 1)] - s[(0, 1)] * s[(1, 0)];
            if det.abs() < f64::EPSILON * s.amax().max(1.0).powi(2) {
                return Err(TrackingError::SingularInnovation);
            }
            Ok(DMatrix::from_row_slice(
                2,
                2,
                &[s[(1, 1)] / det, -s[(0, 1)] / det, -s[(1, 0)] / det, s[(0, 0)] / det],
            ))
        }
        _ => s.clone().try_inverse().ok_or(TrackingError::SingularInnovation),
    }
}

/// Measurement update: folds `z` into the prior produced by [`predict`].
pub fn update(
    state: &KalmanState,
    model: &KalmanModel,
    z: &DVector<f64>,
) -> Result<KalmanState, TrackingError> {
    let n = model.state_dim();
    let m = model.measurement_dim();
    if state.x_prior.nrows() != n {
        return Err(mismatch(format!("state has {} rows, model expects {n}", state.x_prior.nrows())));
    }
    if z.nrows() != m {
        return Err(mismatch(format!("measurement has {} rows, model expects {m}", z.nrows())));
    }
    let s = &model.h * &state.p_prior * model.h.transpose() + &model.r;
    let k = &state.p_prior * model.h.transpose() * invert_innovation(&s)?;
    let x = &state.x_prior + &k * (z - &model.h * &state.x_prior);
    let p = (DMatrix::identity(n, n) - &k * &model.h) * &state.p_prior;
    let p = (&p + p.transpose()) * 0.5;
    Ok(KalmanState {
        x,
        p,
        x_prior: state.x_prior.clone(),
        p_prior: state.p_prior.clone(),
        gain: Some(k),
    })
}

/// Parameters of the constant-velocity centroid filter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackerConfig {
    /// Frame period in seconds.
    pub dt: f64,
    /// White-noise acceleration intensity driving Q.
    pub process_noise: f64,
    /// Measurement variance per axis (px^2).
    pub measurement_variance: f64,
    /// Initial position variance per axis (px^2).
    pub initial_position_variance: f64,
    /// Initial velocity variance per axis (px^2/s^2).
    pub initial_velocity_variance: f64,
    /// Consecutive missed frames tolerated before the track goes invalid.
    pub max_coast: u32,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        Self {
            dt: 0.1,
            process_noise: 1.0,
            measurement_variance: 25.0,
            initial_position_variance: 100.0,
            initial_velocity_variance: 1000.0,
            max_coast: 15,
        }
    }
}

/// Constant-velocity model over `(cx, cy, vx, vy)` with position-only
/// measurements and discrete white-noise-acceleration process noise.
pub fn constant_velocity_model(cfg: &TrackerConfig) -> KalmanModel {
    let dt = cfg.dt;
    let a = DMatrix::from_row_slice(
        4,
        4,
        &[
            1.0, 0.0, dt, 0.0, //
            0.0, 1.0, 0.0, dt, //
            0.0, 0.0, 1.0, 0.0, //
            0.0, 0.0, 0.0, 1.0,
        ],
    );
    let b = DVector::zeros(4);
    let h = DMatrix::from_row_slice(2, 4, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
    let q4 = dt.powi(4) / 4.0;
    let q3 = dt.powi(3) / 2.0;
    let q2 = dt * dt;
    let q = cfg.process_noise
        * DMatrix::from_row_slice(
            4,
            4,
            &[
                q4, 0.0, q3, 0.0, //
                0.0, q4, 0.0, q3, //
                q3, 0.0, q2, 0.0, //
                0.0, q3, 0.0, q2,
            ],
        );
    let r = cfg.measurement_variance * DMatrix::identity(2, 2);
    KalmanModel::new(a, b, h, q, r).expect("constant-velocity dimensions are consistent")
}

/// Smoothed centroid for one frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackedCentroid {
    /// Filtered position (posterior mean).
    pub cx: f64,
    pub cy: f64,
    /// The raw measurement this frame, if any.
    pub raw: Option<Centroid>,
    /// False once the track has coasted past `max_coast` frames.
    pub valid: bool,
}

/// Kalman track over the detected centroid. Updated functionally:
/// [`CentroidTrack::step`] returns the successor track.
#[derive(Debug, Clone, PartialEq)]
pub struct CentroidTrack {
    model: KalmanModel,
    state: KalmanState,
    missed: u32,
    max_coast: u32,
}

impl CentroidTrack {
    /// Starts a track at a first detection with zero initial velocity.
    pub fn init_from(c: Centroid, cfg: &TrackerConfig) -> Self {
        let model = constant_velocity_model(cfg);
        let x = DVector::from_vec(vec![c.cx, c.cy, 0.0, 0.0]);
        let p = DMatrix::from_diagonal(&DVector::from_vec(vec![
            cfg.initial_position_variance,
            cfg.initial_position_variance,
            cfg.initial_velocity_variance,
            cfg.initial_velocity_variance,
        ]));
        let state = KalmanState::new(x, p).expect("4-state init is consistent");
        Self { model, state, missed: 0, max_coast: cfg.max_coast }
    }

    pub fn state(&self) -> &KalmanState {
        &self.state
    }

    pub fn missed(&self) -> u32 {
        self.missed
    }

    /// Advances one frame: always predicts, folds in the measurement when
    /// present, otherwise adopts the prediction and counts the miss.
    pub fn step(
        &self,
        measurement: Option<Centroid>,
    ) -> Result<(CentroidTrack, TrackedCentroid), TrackingError> {
        let predicted = predict(&self.state, &self.model, 0.0)?;
        let (state, missed) = match measurement {
            Some(c) => {
                let z = DVector::from_vec(vec![c.cx, c.cy]);
                (update(&predicted, &self.model, &z)?, 0)
            }
            None => (predicted, self.missed + 1),
        };
        let out = TrackedCentroid {
            cx: state.x()[0],
            cy: state.x()[1],
            raw: measurement,
            valid: missed <= self.max_coast,
        };
        let next = CentroidTrack { model: self.model.clone(), state, missed, max_coast: self.max_coast };
        Ok((next, out))
    }
}

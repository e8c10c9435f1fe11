//! Canny edge extraction with a fully pinned numeric recipe.
//!
//! Every arithmetic step below is part of the operation's contract, so an
//! independent reimplementation that follows this comment reproduces the
//! output bit for bit:
//!
//! 1. Pixels widen to `f64`.
//! 2. Gaussian smoothing (skipped when `sigma == 0`): kernel radius
//!    `ceil(3 * sigma)`, weights `exp(-i^2 / (2 sigma^2))` normalized to
//!    sum 1, horizontal pass then vertical pass, borders clamped to the
//!    nearest edge pixel, taps accumulated in ascending offset order.
//! 3. Sobel gradients on interior pixels (border gradients stay zero):
//!    `gx = (ne + 2e + se) - (nw + 2w + sw)` and
//!    `gy = (sw + 2s + se) - (nw + 2n + ne)`, each parenthesized sum
//!    accumulated left to right; `mag = sqrt(gx*gx + gy*gy)`.
//! 4. Non-maximum suppression along the gradient direction quantized to
//!    four bins (0, 45, 90, 135 degrees; bin boundaries at 22.5 degrees).
//!    A pixel survives iff its magnitude is strictly greater than the
//!    top/left neighbor of the bin and at least the bottom/right one, so
//!    exact ties keep the top/left pixel of a plateau.
//! 5. Hysteresis: magnitudes at or above `high` are strong; pixels at or
//!    above `low` survive iff they reach a strong pixel through a chain
//!    of 8-connected surviving pixels.

use crate::imaging::BinaryMask;

use super::{DetectionError, GrayImage};

/// Thresholds and smoothing width for [`canny`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CannyParams {
    low: f64,
    high: f64,
    sigma: f64,
}

impl CannyParams {
    /// Requires `0 < low < high` and a non-negative sigma.
    pub fn new(low: f64, high: f64, sigma: f64) -> Result<Self, DetectionError> {
        if !(low > 0.0 && low < high && high.is_finite()) {
            return Err(DetectionError::InvalidThresholds { low, high });
        }
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(DetectionError::InvalidSigma(sigma));
        }
        Ok(Self { low, high, sigma })
    }

    pub fn low(&self) -> f64 {
        self.low
    }

    pub fn high(&self) -> f64 {
        self.high
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

impl Default for CannyParams {
    fn default() -> Self {
        Self { low: 50.0, high: 150.0, sigma: 1.4 }
    }
}

/// Gaussian blur per the module recipe; `sigma <= 0` is the identity.
pub(crate) fn gaussian_blur(src: &[f64], w: usize, h: usize, sigma: f64) -> Vec<f64> {
    if sigma <= 0.0 {
        return src.to_vec();
    }
    let radius = (3.0 * sigma).ceil() as i64;
    let mut weights: Vec<f64> =
        (-radius..=radius).map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp()).collect();
    let total: f64 = weights.iter().sum();
    for wt in &mut weights {
        *wt /= total;
    }
    let mut tmp = vec![0.0; src.len()];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (k, wt) in weights.iter().enumerate() {
                let sx = (x as i64 + k as i64 - radius).clamp(0, w as i64 - 1) as usize;
                acc += wt * src[y * w + sx];
            }
            tmp[y * w + x] = acc;
        }
    }
    let mut out = vec![0.0; src.len()];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (k, wt) in weights.iter().enumerate() {
                let sy = (y as i64 + k as i64 - radius).clamp(0, h as i64 - 1) as usize;
                acc += wt * tmp[sy * w + x];
            }
            out[y * w + x] = acc;
        }
    }
    out
}

/// Sobel gradients on interior pixels; borders stay zero.
pub(crate) fn sobel(img: &[f64], w: usize, h: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let mut gx = vec![0.0; img.len()];
    let mut gy = vec![0.0; img.len()];
    let mut mag = vec![0.0; img.len()];
    for y in 1..h - 1 {
        for x in 1..w - 1 {
            let p = |dx: i64, dy: i64| {
                img[(y as i64 + dy) as usize * w + (x as i64 + dx) as usize]
            };
            let dx = (p(1, -1) + 2.0 * p(1, 0) + p(1, 1)) - (p(-1, -1) + 2.0 * p(-1, 0) + p(-1, 1));
            let dy = (p(-1, 1) + 2.0 * p(0, 1) + p(1, 1)) - (p(-1, -1) + 2.0 * p(0, -1) + p(1, -1));
            let i = y * w + x;
            gx[i] = dx;
            gy[i] = dy;
            mag[i] = (dx * dx + dy * dy).sqrt();
        }
    }
    (gx, gy, mag)
}

/// Gradient direction quantized to 0, 45, 90 or 135 degrees.
pub(crate) fn direction_bin(gx: f64, gy: f64) -> u16 {
    let mut angle = gy.atan2(gx).to_degrees();
    if angle < 0.0 {
        angle += 180.0;
    }
    if angle >= 180.0 {
        angle -= 180.0;
    }
    if !(22.5..157.5).contains(&angle) {
        0
    } else if angle < 67.5 {
        45
    } else if angle < 112.5 {
        90
    } else {
        135
    }
}

/// The two competing neighbors for a direction bin, top/left one first.
pub(crate) fn bin_neighbors(bin: u16) -> ((i64, i64), (i64, i64)) {
    match bin {
        0 => ((-1, 0), (1, 0)),
        45 => ((-1, -1), (1, 1)),
        90 => ((0, -1), (0, 1)),
        135 => ((1, -1), (-1, 1)),
        _ => unreachable!("direction bins are 0/45/90/135"),
    }
}

/// Canny edge detector; see the module comment for the exact recipe.
///
/// Border pixels never become edges. Images smaller than 3x3 have no
/// interior and are rejected.
pub fn canny(img: &GrayImage, params: &CannyParams) -> Result<BinaryMask, DetectionError> {
    let (w, h) = (img.width() as usize, img.height() as usize);
    if w < 3 || h < 3 {
        return Err(DetectionError::ImageTooSmall { width: img.width(), height: img.height() });
    }
    let float: Vec<f64> = img.as_raw().iter().map(|&v| v as f64).collect();
    let smooth = gaussian_blur(&float, w, h, params.sigma);
    let (gx, gy, mag) = sobel(&smooth, w, h);

    // Non-maximum suppression, then threshold classification in one pass:
    // 0 = rejected, 1 = weak candidate, 2 = kept (strong or reached).
    let mut state = vec![0u8; w * h];
    let mut stack = Vec::new();
    for y in 1..h - 1 {
        for x in 1..w - 1 {
            let i = y * w + x;
            let m = mag[i];
            if m < params.low {
                continue;
            }
            let (prev, next) = bin_neighbors(direction_bin(gx[i], gy[i]));
            let at = |(dx, dy): (i64, i64)| {
                mag[(y as i64 + dy) as usize * w + (x as i64 + dx) as usize]
            };
            if !(m > at(prev) && m >= at(next)) {
                continue;
            }
            if m >= params.high {
                state[i] = 2;
                stack.push((x, y));
            } else {
                state[i] = 1;
            }
        }
    }
    while let Some((x, y)) = stack.pop() {
        for dy in -1i64..=1 {
            for dx in -1i64..=1 {
                let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                    continue;
                }
                let ni = ny as usize * w + nx as usize;
                if state[ni] == 1 {
                    state[ni] = 2;
                    stack.push((nx as usize, ny as usize));
                }
            }
        }
    }
    let data = state.into_iter().map(|s| (s == 2) as u8).collect();
    Ok(BinaryMask::from_raw(img.width(), img.height(), data).expect("dimensions already checked"))
}

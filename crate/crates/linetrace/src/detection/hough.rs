//! Progressive probabilistic Hough transform.
//!
//! Edge pixels vote in a (rho, theta) accumulator in an order drawn from a
//! seeded generator. As soon as one accumulator cell reaches the vote
//! threshold, the corresponding line is walked through the edge mask in
//! both directions, bridging background runs up to `max_line_gap` pixels.
//! Segments spanning at least `min_line_length` pixels are emitted; every
//! walked edge pixel is consumed so it can neither vote nor seed again,
//! and votes it already cast are retracted. Fixed seed plus fixed mask
//! means a fixed segment list.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::imaging::BinaryMask;

use super::{DetectionError, LineSegment};

/// Accumulator geometry, acceptance thresholds, and the voting-order seed
/// for [`hough_lines`].
#[derive(Debug, Clone, PartialEq)]
pub struct HoughParams {
    rho_resolution: f64,
    theta_resolution: f64,
    vote_threshold: u32,
    min_line_length: u32,
    max_line_gap: u32,
    seed: u64,
}

impl HoughParams {
    pub fn new(
        rho_resolution: f64,
        theta_resolution: f64,
        vote_threshold: u32,
        min_line_length: u32,
        max_line_gap: u32,
        seed: u64,
    ) -> Result<Self, DetectionError> {
        if !(rho_resolution > 0.0 && rho_resolution.is_finite()) {
            return Err(DetectionError::InvalidResolution {
                what: "rho_resolution",
                value: rho_resolution,
            });
        }
        if !(theta_resolution > 0.0 && theta_resolution <= std::f64::consts::PI) {
            return Err(DetectionError::InvalidResolution {
                what: "theta_resolution",
                value: theta_resolution,
            });
        }
        if vote_threshold == 0 || min_line_length == 0 {
            return Err(DetectionError::ZeroHoughThreshold);
        }
        Ok(Self {
            rho_resolution,
            theta_resolution,
            vote_threshold,
            min_line_length,
            max_line_gap,
            seed,
        })
    }

    pub fn rho_resolution(&self) -> f64 {
        self.rho_resolution
    }

    pub fn theta_resolution(&self) -> f64 {
        self.theta_resolution
    }

    pub fn vote_threshold(&self) -> u32 {
        self.vote_threshold
    }

    pub fn min_line_length(&self) -> u32 {
        self.min_line_length
    }

    pub fn max_line_gap(&self) -> u32 {
        self.max_line_gap
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

impl Default for HoughParams {
    /// 1 px rho bins, 1 degree theta bins, 50 votes, 40 px minimum
    /// length, 50 px bridgeable gap.
    fn default() -> Self {
        Self {
            rho_resolution: 1.0,
            theta_resolution: std::f64::consts::PI / 180.0,
            vote_threshold: 50,
            min_line_length: 40,
            max_line_gap: 50,
            seed: 0x11e7,
        }
    }
}

// Fixed-point precision of the line walker.
const SHIFT: i64 = 16;

struct Walker {
    // When true, x advances by whole pixels and y is fixed point;
    // mirrored otherwise.
    xflag: bool,
    dx: i64,
    dy: i64,
    x0: i64,
    y0: i64,
}

impl Walker {
    /// Stepper along direction (a, b), entering at integer pixel (px, py).
    fn new(a: f64, b: f64, px: i64, py: i64) -> Self {
        if a.abs() > b.abs() {
            Self {
                xflag: true,
                dx: if a > 0.0 { 1 } else { -1 },
                dy: (b * (1i64 << SHIFT) as f64 / a.abs()).round() as i64,
                x0: px,
                y0: (py << SHIFT) + (1 << (SHIFT - 1)),
            }
        } else {
            Self {
                xflag: false,
                dx: (a * (1i64 << SHIFT) as f64 / b.abs()).round() as i64,
                dy: if b > 0.0 { 1 } else { -1 },
                x0: (px << SHIFT) + (1 << (SHIFT - 1)),
                y0: py,
            }
        }
    }

    /// Pixel sequence from the seed in the given orientation, inclusive
    /// of the seed pixel, ending at the image border.
    fn pixels(&self, flip: bool, w: i64, h: i64) -> impl Iterator<Item = (i64, i64)> + '_ {
        let (dx, dy) = if flip { (-self.dx, -self.dy) } else { (self.dx, self.dy) };
        let (mut x, mut y) = (self.x0, self.y0);
        let xflag = self.xflag;
        std::iter::from_fn(move || {
            let (px, py) = if xflag { (x, y >> SHIFT) } else { (x >> SHIFT, y) };
            if px < 0 || px >= w || py < 0 || py >= h {
                return None;
            }
            x += dx;
            y += dy;
            Some((px, py))
        })
    }
}

/// Extracts line segments from an edge mask; see the module comment.
pub fn hough_lines(edges: &BinaryMask, params: &HoughParams) -> Vec<LineSegment> {
    let (w, h) = (edges.width() as i64, edges.height() as i64);
    let numangle = (std::f64::consts::PI / params.theta_resolution).round().max(1.0) as usize;
    let numrho = (((w + h) as f64 * 2.0 + 1.0) / params.rho_resolution).round() as i64;
    let irho = 1.0 / params.rho_resolution;
    let trig: Vec<(f64, f64)> = (0..numangle)
        .map(|n| {
            let theta = n as f64 * params.theta_resolution;
            (theta.cos(), theta.sin())
        })
        .collect();

    let mut mask: Vec<bool> = edges.as_raw().iter().map(|&v| v != 0).collect();
    let mut voted = vec![false; mask.len()];
    let mut points: Vec<(i64, i64)> = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if mask[(y * w + x) as usize] {
                points.push((x, y));
            }
        }
    }

    let mut accum = vec![0i32; numangle * numrho as usize];
    let rho_index = |x: i64, y: i64, n: usize| -> usize {
        let r = (x as f64 * trig[n].0 * irho + y as f64 * trig[n].1 * irho).round() as i64
            + (numrho - 1) / 2;
        n * numrho as usize + r as usize
    };

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut segments = Vec::new();
    let mut count = points.len();
    while count > 0 {
        let pick = rng.random_range(0..count);
        let (px, py) = points[pick];
        points[pick] = points[count - 1];
        count -= 1;

        let seed_idx = (py * w + px) as usize;
        // Consumed by an earlier segment.
        if !mask[seed_idx] {
            continue;
        }

        let mut best_votes = params.vote_threshold as i32 - 1;
        let mut best_n = 0usize;
        for n in 0..numangle {
            let cell = rho_index(px, py, n);
            accum[cell] += 1;
            if accum[cell] > best_votes {
                best_votes = accum[cell];
                best_n = n;
            }
        }
        voted[seed_idx] = true;
        if best_votes < params.vote_threshold as i32 {
            continue;
        }

        // Direction along the winning line x cos(theta) + y sin(theta) = rho.
        let (c, s) = trig[best_n];
        let walker = Walker::new(-s, c, px, py);
        let mut ends = [(px, py); 2];
        for k in 0..2 {
            let mut gap = 0;
            for (x, y) in walker.pixels(k == 1, w, h) {
                if mask[(y * w + x) as usize] {
                    gap = 0;
                    ends[k] = (x, y);
                } else {
                    gap += 1;
                    if gap > params.max_line_gap {
                        break;
                    }
                }
            }
        }

        let span = (ends[1].0 - ends[0].0).abs().max((ends[1].1 - ends[0].1).abs()) + 1;
        let good = span >= params.min_line_length as i64;

        // Consume every walked edge pixel; retract votes it has cast.
        for k in 0..2 {
            for (x, y) in walker.pixels(k == 1, w, h) {
                let idx = (y * w + x) as usize;
                if mask[idx] {
                    mask[idx] = false;
                    if voted[idx] {
                        for n in 0..numangle {
                            accum[rho_index(x, y, n)] -= 1;
                        }
                        voted[idx] = false;
                    }
                }
                if (x, y) == ends[k] {
                    break;
                }
            }
        }

        if good {
            segments.push(LineSegment {
                x1: ends[0].0 as i32,
                y1: ends[0].1 as i32,
                x2: ends[1].0 as i32,
                y2: ends[1].1 as i32,
            });
        }
    }
    segments
}

//! Line detection: grayscale conversion, Canny edges, probabilistic
//! Hough segments, and the segment-endpoint centroid.
//!
//! [`detect_line`] chains the full per-frame pipeline: HSV threshold of
//! the color band, morphological denoise, Canny on the mask, Hough
//! segment extraction, and centroid aggregation. The line's position in
//! the frame is summarized by the mean of all segment endpoints.

mod canny;
mod hough;

use std::time::Instant;

use thiserror::Error;

use crate::imaging::{
    convert_image, denoise, threshold_hsv, BinaryMask, HsvRange, RgbImage, StructuringElement,
};

pub use canny::{canny, CannyParams};
pub use hough::{hough_lines, HoughParams};

#[derive(Debug, Error, PartialEq)]
pub enum DetectionError {
    #[error("image {width}x{height} too small for edge detection (needs 3x3)")]
    ImageTooSmall { width: u32, height: u32 },
    #[error("thresholds must satisfy 0 < low < high, got low {low}, high {high}")]
    InvalidThresholds { low: f64, high: f64 },
    #[error("blur sigma must be finite and non-negative, got {0}")]
    InvalidSigma(f64),
    #[error("{what} must be positive and finite, got {value}")]
    InvalidResolution { what: &'static str, value: f64 },
    #[error("vote threshold and minimum line length must be nonzero")]
    ZeroHoughThreshold,
}

/// 8-bit single-channel image, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn from_raw(width: u32, height: u32, data: Vec<u8>) -> Option<Self> {
        (data.len() == width as usize * height as usize).then_some(Self { width, height, data })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn get(&self, x: u32, y: u32) -> u8 {
        assert!(x < self.width && y < self.height, "pixel ({x},{y}) out of bounds");
        self.data[y as usize * self.width as usize + x as usize]
    }

    pub fn as_raw(&self) -> &[u8] {
        &self.data
    }
}

/// Rec. 601 luma: `round(0.299 r + 0.587 g + 0.114 b)` per pixel.
pub fn to_gray(img: &RgbImage) -> GrayImage {
    let data = img
        .as_raw()
        .chunks_exact(3)
        .map(|px| {
            (0.299 * px[0] as f64 + 0.587 * px[1] as f64 + 0.114 * px[2] as f64).round() as u8
        })
        .collect();
    GrayImage { width: img.width(), height: img.height(), data }
}

/// Expands a binary mask to a 0/255 grayscale image for edge detection.
pub fn mask_to_gray(mask: &BinaryMask) -> GrayImage {
    let data = mask.as_raw().iter().map(|&v| if v != 0 { 255 } else { 0 }).collect();
    GrayImage { width: mask.width(), height: mask.height(), data }
}

/// Line segment endpoints in pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LineSegment {
    pub x1: i32,
    pub y1: i32,
    pub x2: i32,
    pub y2: i32,
}

impl LineSegment {
    /// Euclidean endpoint distance.
    pub fn length(&self) -> f64 {
        let dx = (self.x2 - self.x1) as f64;
        let dy = (self.y2 - self.y1) as f64;
        (dx * dx + dy * dy).sqrt()
    }

    /// Orientation in degrees within [0, 180).
    pub fn angle_degrees(&self) -> f64 {
        let mut a = ((self.y2 - self.y1) as f64)
            .atan2((self.x2 - self.x1) as f64)
            .to_degrees();
        if a < 0.0 {
            a += 180.0;
        }
        if a >= 180.0 {
            a -= 180.0;
        }
        a
    }
}

/// Pixel-space line position estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Centroid {
    pub cx: f64,
    pub cy: f64,
}

/// Mean of all segment endpoints (both per segment); `None` when no
/// segments were found.
pub fn centroid_of(segments: &[LineSegment]) -> Option<Centroid> {
    if segments.is_empty() {
        return None;
    }
    let n = (segments.len() * 2) as f64;
    let (sx, sy) = segments.iter().fold((0.0, 0.0), |(sx, sy), s| {
        (sx + (s.x1 + s.x2) as f64, sy + (s.y1 + s.y2) as f64)
    });
    Some(Centroid { cx: sx / n, cy: sy / n })
}

/// Everything the pipeline reports for one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionResult {
    pub segments: Vec<LineSegment>,
    /// Present iff `segments` is non-empty.
    pub centroid: Option<Centroid>,
    /// Wall-clock seconds the frame spent in the pipeline.
    pub timing: f64,
}

/// Parameters of the whole per-frame pipeline.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DetectionConfig {
    pub band: HsvRange,
    pub kernel: StructuringElement,
    pub canny: CannyParams,
    pub hough: HoughParams,
}

/// Intermediate artifacts kept for inspection and debug dumps.
#[derive(Debug, Clone)]
pub struct DetectionStages {
    /// Color-band mask after denoising.
    pub mask: BinaryMask,
    /// Canny edges of the mask.
    pub edges: BinaryMask,
    pub result: DetectionResult,
}

/// Runs the full detection pipeline on one frame, keeping the
/// intermediate mask and edge images.
pub fn detect_stages(
    frame: &RgbImage,
    cfg: &DetectionConfig,
) -> Result<DetectionStages, DetectionError> {
    let started = Instant::now();
    let hsv = convert_image(frame);
    let raw_mask = threshold_hsv(&hsv, &cfg.band);
    let mask = denoise(&raw_mask, &cfg.kernel);
    let edges = canny(&mask_to_gray(&mask), &cfg.canny)?;
    let segments = hough_lines(&edges, &cfg.hough);
    let centroid = centroid_of(&segments);
    let result = DetectionResult { segments, centroid, timing: started.elapsed().as_secs_f64() };
    Ok(DetectionStages { mask, edges, result })
}

/// Runs the full detection pipeline on one frame.
pub fn detect_line(frame: &RgbImage, cfg: &DetectionConfig) -> Result<DetectionResult, DetectionError> {
    detect_stages(frame, cfg).map(|stages| stages.result)
}

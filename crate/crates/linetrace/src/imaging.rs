//! Color segmentation primitives: RGB to HSV conversion, inclusive
//! color-band thresholding, and binary morphology.
//!
//! Hue is stored in half-degree units so the full circle fits an octet:
//! `h` ranges over `[0, 180)` and one unit equals two degrees. Pure yellow
//! (60 degrees) therefore lands at `h = 30`. Saturation and value use the
//! full `[0, 255]` range. Morphology uses square all-ones structuring
//! elements; out-of-bounds neighbors always read as background.

use thiserror::Error;

/// Default color band segmenting the yellow guide line from a gray floor.
pub const YELLOW_BAND: HsvRange = HsvRange {
    lower: HsvPixel { h: 18, s: 94, v: 140 },
    upper: HsvPixel { h: 48, s: 255, v: 255 },
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ImagingError {
    #[error("image dimensions must be nonzero, got {width}x{height}")]
    EmptyImage { width: u32, height: u32 },
    #[error("buffer length {len} does not match {width}x{height} ({expected} expected)")]
    BufferSize { width: u32, height: u32, len: usize, expected: usize },
    #[error("mask values must be 0 or 1, found {0}")]
    NotBinary(u8),
    #[error("hsv range must satisfy lower <= upper componentwise, got {lower:?} > {upper:?}")]
    InvertedRange { lower: HsvPixel, upper: HsvPixel },
    #[error("structuring element half width must be at least 1")]
    ZeroKernel,
}

/// Interleaved 8-bit RGB image, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl RgbImage {
    /// Solid-color image of the given size.
    pub fn filled(width: u32, height: u32, rgb: (u8, u8, u8)) -> Result<Self, ImagingError> {
        check_dims(width, height)?;
        let mut data = Vec::with_capacity(width as usize * height as usize * 3);
        for _ in 0..width as usize * height as usize {
            data.extend_from_slice(&[rgb.0, rgb.1, rgb.2]);
        }
        Ok(Self { width, height, data })
    }

    pub fn from_raw(width: u32, height: u32, data: Vec<u8>) -> Result<Self, ImagingError> {
        check_dims(width, height)?;
        let expected = width as usize * height as usize * 3;
        if data.len() != expected {
            return Err(ImagingError::BufferSize { width, height, len: data.len(), expected });
        }
        Ok(Self { width, height, data })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixel(&self, x: u32, y: u32) -> (u8, u8, u8) {
        let i = self.index(x, y);
        (self.data[i], self.data[i + 1], self.data[i + 2])
    }

    pub fn set_pixel(&mut self, x: u32, y: u32, rgb: (u8, u8, u8)) {
        let i = self.index(x, y);
        self.data[i] = rgb.0;
        self.data[i + 1] = rgb.1;
        self.data[i + 2] = rgb.2;
    }

    pub fn as_raw(&self) -> &[u8] {
        &self.data
    }

    pub fn as_mut_raw(&mut self) -> &mut [u8] {
        &mut self.data
    }

    fn index(&self, x: u32, y: u32) -> usize {
        assert!(x < self.width && y < self.height, "pixel ({x},{y}) out of bounds");
        (y as usize * self.width as usize + x as usize) * 3
    }
}

/// One HSV sample; `h` in half-degrees `[0, 180)`, `s` and `v` in `[0, 255]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HsvPixel {
    pub h: u8,
    pub s: u8,
    pub v: u8,
}

/// Planar-free HSV image, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HsvImage {
    width: u32,
    height: u32,
    data: Vec<HsvPixel>,
}

impl HsvImage {
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixel(&self, x: u32, y: u32) -> HsvPixel {
        assert!(x < self.width && y < self.height, "pixel ({x},{y}) out of bounds");
        self.data[y as usize * self.width as usize + x as usize]
    }
}

/// Inclusive HSV box; a pixel matches iff every channel lies inside.
///
/// `lower <= upper` holds componentwise, so bands never wrap around the
/// hue circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HsvRange {
    lower: HsvPixel,
    upper: HsvPixel,
}

impl HsvRange {
    pub fn new(lower: HsvPixel, upper: HsvPixel) -> Result<Self, ImagingError> {
        if lower.h > upper.h || lower.s > upper.s || lower.v > upper.v {
            return Err(ImagingError::InvertedRange { lower, upper });
        }
        Ok(Self { lower, upper })
    }

    pub fn lower(&self) -> HsvPixel {
        self.lower
    }

    pub fn upper(&self) -> HsvPixel {
        self.upper
    }

    pub fn contains(&self, p: HsvPixel) -> bool {
        self.lower.h <= p.h
            && p.h <= self.upper.h
            && self.lower.s <= p.s
            && p.s <= self.upper.s
            && self.lower.v <= p.v
            && p.v <= self.upper.v
    }
}

impl Default for HsvRange {
    fn default() -> Self {
        YELLOW_BAND
    }
}

/// Binary image, row major, one byte per pixel holding 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl BinaryMask {
    pub fn zeros(width: u32, height: u32) -> Result<Self, ImagingError> {
        check_dims(width, height)?;
        Ok(Self { width, height, data: vec![0; width as usize * height as usize] })
    }

    pub fn from_raw(width: u32, height: u32, data: Vec<u8>) -> Result<Self, ImagingError> {
        check_dims(width, height)?;
        let expected = width as usize * height as usize;
        if data.len() != expected {
            return Err(ImagingError::BufferSize { width, height, len: data.len(), expected });
        }
        if let Some(&bad) = data.iter().find(|&&v| v > 1) {
            return Err(ImagingError::NotBinary(bad));
        }
        Ok(Self { width, height, data })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn get(&self, x: u32, y: u32) -> bool {
        assert!(x < self.width && y < self.height, "pixel ({x},{y}) out of bounds");
        self.data[y as usize * self.width as usize + x as usize] != 0
    }

    pub fn set(&mut self, x: u32, y: u32, value: bool) {
        assert!(x < self.width && y < self.height, "pixel ({x},{y}) out of bounds");
        self.data[y as usize * self.width as usize + x as usize] = value as u8;
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().filter(|&&v| v != 0).count()
    }

    pub fn as_raw(&self) -> &[u8] {
        &self.data
    }

    /// Signed-coordinate read; anything outside the image is background.
    /// Only the reference implementations in the tests still need this;
    /// the production paths use bulk row operations instead.
    #[cfg(test)]
    fn get_clamped(&self, x: i64, y: i64) -> bool {
        if x < 0 || y < 0 || x >= self.width as i64 || y >= self.height as i64 {
            return false;
        }
        self.data[y as usize * self.width as usize + x as usize] != 0
    }
}

/// Square all-ones structuring element of side `2 * half_width + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StructuringElement {
    half_width: u32,
}

impl StructuringElement {
    pub fn new(half_width: u32) -> Result<Self, ImagingError> {
        if half_width == 0 {
            return Err(ImagingError::ZeroKernel);
        }
        Ok(Self { half_width })
    }

    pub fn half_width(&self) -> u32 {
        self.half_width
    }
}

impl Default for StructuringElement {
    /// 3x3 kernel.
    fn default() -> Self {
        Self { half_width: 1 }
    }
}

fn check_dims(width: u32, height: u32) -> Result<(), ImagingError> {
    if width == 0 || height == 0 {
        return Err(ImagingError::EmptyImage { width, height });
    }
    Ok(())
}

/// Converts one RGB sample to HSV via the hexcone model.
///
/// Achromatic inputs (zero chroma) report hue 0 and saturation 0. Hue
/// ties between channels resolve in R, G, B priority order.
pub fn rgb_to_hsv(r: u8, g: u8, b: u8) -> HsvPixel {
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let v = max;
    let delta = (max - min) as f64;
    if max == 0 || delta == 0.0 {
        return HsvPixel { h: 0, s: 0, v };
    }
    let s = (delta * 255.0 / max as f64).round() as u8;
    let (rf, gf, bf) = (r as f64, g as f64, b as f64);
    let mut h_deg = if max == r {
        60.0 * (gf - bf) / delta
    } else if max == g {
        60.0 * (bf - rf) / delta + 120.0
    } else {
        60.0 * (rf - gf) / delta + 240.0
    };
    if h_deg < 0.0 {
        h_deg += 360.0;
    }
    // Half-degree quantization; 360 degrees wraps back onto 0.
    let mut h = (h_deg / 2.0).round() as u32;
    if h >= 180 {
        h -= 180;
    }
    HsvPixel { h: h as u8, s, v }
}

/// Converts a whole frame to HSV, preserving dimensions.
pub fn convert_image(img: &RgbImage) -> HsvImage {
    let data = img
        .data
        .chunks_exact(3)
        .map(|px| rgb_to_hsv(px[0], px[1], px[2]))
        .collect();
    HsvImage { width: img.width, height: img.height, data }
}

/// Marks every pixel whose HSV value lies inside `range` (inclusive).
pub fn threshold_hsv(img: &HsvImage, range: &HsvRange) -> BinaryMask {
    let data = img.data.iter().map(|&p| range.contains(p) as u8).collect();
    BinaryMask { width: img.width, height: img.height, data }
}

/// Morphological erosion: a pixel survives iff every pixel under the
/// kernel is set. Out-of-bounds neighbors read as background, so pixels
/// closer than `half_width` to a border never survive.
pub fn erode(mask: &BinaryMask, se: &StructuringElement) -> BinaryMask {
    let hw = se.half_width as i64;
    let (w, h) = (mask.width as i64, mask.height as i64);
    let mut out = vec![0u8; mask.data.len()];
    for y in hw..h - hw {
        for x in hw..w - hw {
            let mut keep = true;
            'kernel: for dy in -hw..=hw {
                let row = ((y + dy) * w) as usize;
                for dx in -hw..=hw {
                    if mask.data[row + (x + dx) as usize] == 0 {
                        keep = false;
                        break 'kernel;
                    }
                }
            }
            if keep {
                out[(y * w + x) as usize] = 1;
            }
        }
    }
    BinaryMask { width: mask.width, height: mask.height, data: out }
}

/// Morphological dilation: a pixel is set iff any pixel under the kernel
/// is set. Out-of-bounds neighbors read as background.
pub fn dilate(mask: &BinaryMask, se: &StructuringElement) -> BinaryMask {
    let hw = se.half_width as i64;
    let (w, h) = (mask.width as i64, mask.height as i64);
    let mut out = vec![0u8; mask.data.len()];
    // Equivalent scatter form: the dilation is the union of kernel-sized
    // boxes centered on the set pixels, which is much cheaper on the
    // sparse masks segmentation produces.
    for y in 0..h {
        let row = (y * w) as usize;
        for x in 0..w {
            if mask.data[row + x as usize] == 0 {
                continue;
            }
            let x0 = (x - hw).max(0) as usize;
            let x1 = (x + hw).min(w - 1) as usize;
            for yy in (y - hw).max(0)..=(y + hw).min(h - 1) {
                let r = (yy * w) as usize;
                out[r + x0..=r + x1].fill(1);
            }
        }
    }
    BinaryMask { width: mask.width, height: mask.height, data: out }
}

/// Morphological opening (erode, then dilate with the same kernel).
///
/// Removes any connected component whose bounding box fits strictly
/// inside the kernel while leaving large regions intact away from their
/// boundary.
pub fn denoise(mask: &BinaryMask, se: &StructuringElement) -> BinaryMask {
    dilate(&erode(mask, se), se)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mask_from_rows(rows: &[&str]) -> BinaryMask {
        let height = rows.len() as u32;
        let width = rows[0].len() as u32;
        let data = rows
            .iter()
            .flat_map(|r| r.bytes().map(|b| if b == b'#' { 1u8 } else { 0u8 }))
            .collect();
        BinaryMask::from_raw(width, height, data).unwrap()
    }

    #[test]
    fn hsv_of_pure_yellow() {
        assert_eq!(rgb_to_hsv(255, 255, 0), HsvPixel { h: 30, s: 255, v: 255 });
    }

    #[test]
    fn hsv_of_pure_red() {
        assert_eq!(rgb_to_hsv(255, 0, 0), HsvPixel { h: 0, s: 255, v: 255 });
    }

    #[test]
    fn hsv_of_pure_blue() {
        assert_eq!(rgb_to_hsv(0, 0, 255), HsvPixel { h: 120, s: 255, v: 255 });
    }

    #[test]
    fn hsv_of_mid_gray_is_achromatic() {
        assert_eq!(rgb_to_hsv(128, 128, 128), HsvPixel { h: 0, s: 0, v: 128 });
    }

    #[test]
    fn hsv_of_black() {
        assert_eq!(rgb_to_hsv(0, 0, 0), HsvPixel { h: 0, s: 0, v: 0 });
    }

    #[test]
    fn hue_wraps_below_red() {
        // (255, 0, 1): hue fractionally below 360 degrees, rounds onto 0.
        assert_eq!(rgb_to_hsv(255, 0, 1).h, 0);
    }

    #[test]
    fn convert_image_maps_every_pixel() {
        let img = RgbImage::filled(4, 3, (255, 255, 0)).unwrap();
        let hsv = convert_image(&img);
        assert_eq!((hsv.width(), hsv.height()), (4, 3));
        for y in 0..3 {
            for x in 0..4 {
                assert_eq!(hsv.pixel(x, y), HsvPixel { h: 30, s: 255, v: 255 });
            }
        }
    }

    #[test]
    fn threshold_accepts_inside_band() {
        let img = RgbImage::filled(4, 4, (200, 180, 40)).unwrap();
        let hsv = convert_image(&img);
        let p = hsv.pixel(0, 0);
        assert!(YELLOW_BAND.contains(p), "{p:?} should sit inside the yellow band");
        let mask = threshold_hsv(&hsv, &YELLOW_BAND);
        assert_eq!(mask.count_ones(), 16);
    }

    #[test]
    fn threshold_rejects_outside_band() {
        let img = RgbImage::filled(4, 4, (0, 200, 50)).unwrap();
        let hsv = convert_image(&img);
        assert!(!YELLOW_BAND.contains(hsv.pixel(0, 0)));
        let mask = threshold_hsv(&hsv, &YELLOW_BAND);
        assert_eq!(mask.count_ones(), 0);
    }

    #[test]
    fn threshold_bounds_are_inclusive() {
        let range = HsvRange::new(
            HsvPixel { h: 18, s: 94, v: 140 },
            HsvPixel { h: 48, s: 255, v: 255 },
        )
        .unwrap();
        assert!(range.contains(HsvPixel { h: 18, s: 94, v: 140 }));
        assert!(range.contains(HsvPixel { h: 48, s: 255, v: 255 }));
        assert!(!range.contains(HsvPixel { h: 17, s: 94, v: 140 }));
        assert!(!range.contains(HsvPixel { h: 49, s: 255, v: 255 }));
    }

    #[test]
    fn inverted_range_is_rejected() {
        let err = HsvRange::new(
            HsvPixel { h: 48, s: 94, v: 140 },
            HsvPixel { h: 18, s: 255, v: 255 },
        )
        .unwrap_err();
        assert!(matches!(err, ImagingError::InvertedRange { .. }));
    }

    #[test]
    fn erode_shrinks_full_mask_to_interior() {
        let full = BinaryMask::from_raw(5, 5, vec![1; 25]).unwrap();
        let eroded = erode(&full, &StructuringElement::default());
        let expected = mask_from_rows(&[".....", ".###.", ".###.", ".###.", "....."]);
        assert_eq!(eroded, expected);
    }

    #[test]
    fn erode_removes_single_pixel() {
        let mut m = BinaryMask::zeros(5, 5).unwrap();
        m.set(2, 2, true);
        assert_eq!(erode(&m, &StructuringElement::default()).count_ones(), 0);
    }

    #[test]
    fn dilate_grows_single_pixel_to_block() {
        let mut m = BinaryMask::zeros(5, 5).unwrap();
        m.set(2, 2, true);
        let dilated = dilate(&m, &StructuringElement::default());
        let expected = mask_from_rows(&[".....", ".###.", ".###.", ".###.", "....."]);
        assert_eq!(dilated, expected);
    }

    #[test]
    fn dilate_of_empty_is_empty() {
        let m = BinaryMask::zeros(6, 4).unwrap();
        assert_eq!(dilate(&m, &StructuringElement::default()).count_ones(), 0);
    }

    #[test]
    fn denoise_drops_speck_keeps_bar() {
        let m = mask_from_rows(&[
            "..............",
            ".#............",
            "....##########",
            "....##########",
            "....##########",
            "..............",
        ]);
        let cleaned = denoise(&m, &StructuringElement::default());
        assert!(!cleaned.get(1, 1), "isolated speck must vanish");
        for y in 2..5 {
            for x in 4..14 {
                assert!(cleaned.get(x, y), "bar pixel ({x},{y}) must survive opening");
            }
        }
    }

    /// Brute-force min-filter: the reference erosion every implementation
    /// change is checked against.
    fn erode_oracle(mask: &BinaryMask, hw: i64) -> BinaryMask {
        let mut out = BinaryMask::zeros(mask.width(), mask.height()).unwrap();
        for y in 0..mask.height() as i64 {
            for x in 0..mask.width() as i64 {
                let window_min = (-hw..=hw)
                    .flat_map(|dy| (-hw..=hw).map(move |dx| (x + dx, y + dy)))
                    .map(|(nx, ny)| mask.get_clamped(nx, ny) as u8)
                    .min()
                    .unwrap();
                out.set(x as u32, y as u32, window_min == 1);
            }
        }
        out
    }

    /// Brute-force max-filter, the dilation counterpart of `erode_oracle`.
    fn dilate_oracle(mask: &BinaryMask, hw: i64) -> BinaryMask {
        let mut out = BinaryMask::zeros(mask.width(), mask.height()).unwrap();
        for y in 0..mask.height() as i64 {
            for x in 0..mask.width() as i64 {
                let window_max = (-hw..=hw)
                    .flat_map(|dy| (-hw..=hw).map(move |dx| (x + dx, y + dy)))
                    .map(|(nx, ny)| mask.get_clamped(nx, ny) as u8)
                    .max()
                    .unwrap();
                out.set(x as u32, y as u32, window_max == 1);
            }
        }
        out
    }

    /// 8-connected components with their bounding boxes, for the
    /// small-component-removal property.
    fn components(mask: &BinaryMask) -> Vec<(Vec<(u32, u32)>, u32, u32)> {
        let mut seen = vec![false; (mask.width() * mask.height()) as usize];
        let mut out = Vec::new();
        for y in 0..mask.height() {
            for x in 0..mask.width() {
                let idx = (y * mask.width() + x) as usize;
                if !mask.get(x, y) || seen[idx] {
                    continue;
                }
                let mut stack = vec![(x, y)];
                seen[idx] = true;
                let mut pixels = Vec::new();
                let (mut min_x, mut max_x, mut min_y, mut max_y) = (x, x, y, y);
                while let Some((cx, cy)) = stack.pop() {
                    pixels.push((cx, cy));
                    min_x = min_x.min(cx);
                    max_x = max_x.max(cx);
                    min_y = min_y.min(cy);
                    max_y = max_y.max(cy);
                    for dy in -1i64..=1 {
                        for dx in -1i64..=1 {
                            let (nx, ny) = (cx as i64 + dx, cy as i64 + dy);
                            if mask.get_clamped(nx, ny) {
                                let nidx = (ny * mask.width() as i64 + nx) as usize;
                                if !seen[nidx] {
                                    seen[nidx] = true;
                                    stack.push((nx as u32, ny as u32));
                                }
                            }
                        }
                    }
                }
                out.push((pixels, max_x - min_x + 1, max_y - min_y + 1));
            }
        }
        out
    }

    fn arb_mask(max_side: u32) -> impl Strategy<Value = BinaryMask> {
        (3..=max_side, 3..=max_side).prop_flat_map(|(w, h)| {
            proptest::collection::vec(0..=1u8, (w * h) as usize)
                .prop_map(move |data| BinaryMask::from_raw(w, h, data).unwrap())
        })
    }

    proptest! {
        #[test]
        fn erode_matches_min_filter_oracle(mask in arb_mask(16)) {
            let se = StructuringElement::default();
            prop_assert_eq!(erode(&mask, &se), erode_oracle(&mask, 1));
        }

        #[test]
        fn dilate_matches_max_filter_oracle(mask in arb_mask(16)) {
            let se = StructuringElement::default();
            prop_assert_eq!(dilate(&mask, &se), dilate_oracle(&mask, 1));
        }

        #[test]
        fn erosion_and_dilation_bracket_the_mask(mask in arb_mask(16)) {
            let se = StructuringElement::default();
            let eroded = erode(&mask, &se);
            let dilated = dilate(&mask, &se);
            for y in 0..mask.height() {
                for x in 0..mask.width() {
                    prop_assert!(!eroded.get(x, y) || mask.get(x, y));
                    prop_assert!(!mask.get(x, y) || dilated.get(x, y));
                }
            }
        }

        /// erode(m) == !dilate(!m) wherever the kernel stays in bounds; at
        /// the border the all-background convention breaks the symmetry,
        /// so the comparison is restricted to the interior.
        #[test]
        fn erosion_is_dual_to_dilation_on_interior(mask in arb_mask(16)) {
            let se = StructuringElement::default();
            let eroded = erode(&mask, &se);
            let complement = BinaryMask::from_raw(
                mask.width(),
                mask.height(),
                mask.as_raw().iter().map(|&v| 1 - v).collect(),
            ).unwrap();
            let dilated_complement = dilate(&complement, &se);
            for y in 1..mask.height() - 1 {
                for x in 1..mask.width() - 1 {
                    prop_assert_eq!(eroded.get(x, y), !dilated_complement.get(x, y),
                        "duality violated at ({}, {})", x, y);
                }
            }
        }

        #[test]
        fn widening_the_band_never_loses_pixels(
            pixels in proptest::collection::vec((0..180u8, any::<u8>(), any::<u8>()), 12),
            lo in (0..90u8, 0..128u8, 0..128u8),
            hi in (90..180u8, 128..=255u8, 128..=255u8),
            slack in (0..20u8, 0..40u8, 0..40u8),
        ) {
            let data: Vec<HsvPixel> =
                pixels.iter().map(|&(h, s, v)| HsvPixel { h, s, v }).collect();
            let img = HsvImage { width: 12, height: 1, data };
            let narrow = HsvRange::new(
                HsvPixel { h: lo.0, s: lo.1, v: lo.2 },
                HsvPixel { h: hi.0, s: hi.1, v: hi.2 },
            ).unwrap();
            let wide = HsvRange::new(
                HsvPixel {
                    h: lo.0.saturating_sub(slack.0),
                    s: lo.1.saturating_sub(slack.1),
                    v: lo.2.saturating_sub(slack.2),
                },
                HsvPixel {
                    h: (hi.0.saturating_add(slack.0)).min(179),
                    s: hi.1.saturating_add(slack.1),
                    v: hi.2.saturating_add(slack.2),
                },
            ).unwrap();
            let m_narrow = threshold_hsv(&img, &narrow);
            let m_wide = threshold_hsv(&img, &wide);
            for x in 0..12 {
                prop_assert!(!m_narrow.get(x, 0) || m_wide.get(x, 0));
            }
        }

        #[test]
        fn opening_is_anti_extensive_and_idempotent(mask in arb_mask(16)) {
            let se = StructuringElement::default();
            let opened = denoise(&mask, &se);
            for y in 0..mask.height() {
                for x in 0..mask.width() {
                    prop_assert!(!opened.get(x, y) || mask.get(x, y));
                }
            }
            prop_assert_eq!(denoise(&opened, &se), opened.clone());
        }

        #[test]
        fn opening_removes_components_smaller_than_kernel(mask in arb_mask(16)) {
            let se = StructuringElement::default();
            let opened = denoise(&mask, &se);
            for (pixels, bbox_w, bbox_h) in components(&mask) {
                if bbox_w < 3 && bbox_h < 3 {
                    for (x, y) in pixels {
                        prop_assert!(!opened.get(x, y),
                            "component pixel ({}, {}) should be removed", x, y);
                    }
                }
            }
        }

        #[test]
        fn value_channel_is_max_and_gray_is_unsaturated(r in any::<u8>(), g in any::<u8>(), b in any::<u8>()) {
            let p = rgb_to_hsv(r, g, b);
            prop_assert_eq!(p.v, r.max(g).max(b));
            prop_assert!(p.h < 180);
            if r == g && g == b {
                prop_assert_eq!(p.s, 0);
                prop_assert_eq!(p.h, 0);
            }
        }
    }
}

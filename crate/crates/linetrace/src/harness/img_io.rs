//! Minimal netpbm image I/O plus overlay drawing helpers.
//!
//! Color frames travel as binary PPM (`P6`, maxval 255) and masks as
//! packed binary PBM (`P4`), both trivially diffable and viewable with
//! stock tools. Decoding accepts the full header grammar (comments,
//! arbitrary whitespace) but only the binary variants.

use std::fs;
use std::path::Path;

use crate::harness::HarnessError;
use crate::imaging::{BinaryMask, RgbImage};

/// Cursor over a netpbm header; raster data starts after the single
/// whitespace byte that terminates the last header token.
struct HeaderReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderReader<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    fn skip_separators(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Result<&'a [u8], HarnessError> {
        self.skip_separators();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(HarnessError::ImageFormat("truncated header".into()));
        }
        Ok(&self.bytes[start..self.pos])
    }

    fn number(&mut self) -> Result<u32, HarnessError> {
        let token = self.token()?;
        std::str::from_utf8(token)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| {
                HarnessError::ImageFormat(format!(
                    "expected a number in header, got {:?}",
                    String::from_utf8_lossy(token)
                ))
            })
    }

    /// Consumes the one whitespace byte separating header from raster.
    fn raster(self) -> Result<&'a [u8], HarnessError> {
        match self.bytes.get(self.pos) {
            Some(b) if b.is_ascii_whitespace() => Ok(&self.bytes[self.pos + 1..]),
            _ => Err(HarnessError::ImageFormat("missing raster separator".into())),
        }
    }
}

pub fn encode_ppm(image: &RgbImage) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", image.width(), image.height()).into_bytes();
    out.extend_from_slice(image.as_raw());
    out
}

pub fn decode_ppm(bytes: &[u8]) -> Result<RgbImage, HarnessError> {
    let mut header = HeaderReader::new(bytes);
    let magic = header.token()?;
    if magic != b"P6" {
        return Err(HarnessError::ImageFormat(format!(
            "expected P6, got {:?}",
            String::from_utf8_lossy(magic)
        )));
    }
    let width = header.number()?;
    let height = header.number()?;
    let maxval = header.number()?;
    if maxval != 255 {
        return Err(HarnessError::ImageFormat(format!("unsupported maxval {maxval}")));
    }
    let raster = header.raster()?;
    let need = (width as usize)
        .checked_mul(height as usize)
        .and_then(|n| n.checked_mul(3))
        .ok_or_else(|| HarnessError::ImageFormat("image dimensions overflow".into()))?;
    if raster.len() != need {
        return Err(HarnessError::ImageFormat(format!(
            "raster holds {} bytes, dimensions imply {need}",
            raster.len()
        )));
    }
    Ok(RgbImage::from_raw(width, height, raster.to_vec())?)
}

/// Packs the mask MSB-first with rows padded to whole bytes; set pixels
/// become 1 bits (black, per PBM convention).
pub fn encode_pbm(mask: &BinaryMask) -> Vec<u8> {
    let (w, h) = (mask.width() as usize, mask.height() as usize);
    let stride = w.div_ceil(8);
    let mut out = format!("P4\n{w} {h}\n").into_bytes();
    let data = mask.as_raw();
    for y in 0..h {
        let row = &data[y * w..(y + 1) * w];
        let mut packed = vec![0u8; stride];
        for (x, &v) in row.iter().enumerate() {
            if v != 0 {
                packed[x / 8] |= 0x80 >> (x % 8);
            }
        }
        out.extend_from_slice(&packed);
    }
    out
}

pub fn decode_pbm(bytes: &[u8]) -> Result<BinaryMask, HarnessError> {
    let mut header = HeaderReader::new(bytes);
    let magic = header.token()?;
    if magic != b"P4" {
        return Err(HarnessError::ImageFormat(format!(
            "expected P4, got {:?}",
            String::from_utf8_lossy(magic)
        )));
    }
    let width = header.number()?;
    let height = header.number()?;
    let raster = header.raster()?;
    let stride = (width as usize).div_ceil(8);
    let need = stride
        .checked_mul(height as usize)
        .ok_or_else(|| HarnessError::ImageFormat("image dimensions overflow".into()))?;
    if raster.len() != need {
        return Err(HarnessError::ImageFormat(format!(
            "raster holds {} bytes, dimensions imply {need}",
            raster.len()
        )));
    }
    let mut data = Vec::with_capacity(width as usize * height as usize);
    for y in 0..height as usize {
        let row = &raster[y * stride..(y + 1) * stride];
        for x in 0..width as usize {
            data.push((row[x / 8] >> (7 - x % 8)) & 1);
        }
    }
    Ok(BinaryMask::from_raw(width, height, data)?)
}

pub fn save_ppm(path: &Path, image: &RgbImage) -> Result<(), HarnessError> {
    Ok(fs::write(path, encode_ppm(image))?)
}

pub fn load_ppm(path: &Path) -> Result<RgbImage, HarnessError> {
    decode_ppm(&fs::read(path)?)
}

pub fn save_pbm(path: &Path, mask: &BinaryMask) -> Result<(), HarnessError> {
    Ok(fs::write(path, encode_pbm(mask))?)
}

pub fn load_pbm(path: &Path) -> Result<BinaryMask, HarnessError> {
    decode_pbm(&fs::read(path)?)
}

/// Bresenham line between two pixel coordinates; points outside the
/// canvas are silently skipped so callers may pass unclipped endpoints.
pub fn draw_line(image: &mut RgbImage, a: (i64, i64), b: (i64, i64), color: (u8, u8, u8)) {
    let (mut x, mut y) = a;
    let dx = (b.0 - a.0).abs();
    let dy = -(b.1 - a.1).abs();
    let sx = if a.0 < b.0 { 1 } else { -1 };
    let sy = if a.1 < b.1 { 1 } else { -1 };
    let mut err = dx + dy;
    loop {
        if x >= 0 && y >= 0 && (x as u64) < image.width() as u64 && (y as u64) < image.height() as u64
        {
            image.set_pixel(x as u32, y as u32, color);
        }
        if x == b.0 && y == b.1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
    }
}

/// Filled disc marker, clipped to the canvas.
pub fn draw_disc(image: &mut RgbImage, center: (i64, i64), radius: i64, color: (u8, u8, u8)) {
    for y in center.1 - radius..=center.1 + radius {
        for x in center.0 - radius..=center.0 + radius {
            let (dx, dy) = (x - center.0, y - center.1);
            if dx * dx + dy * dy <= radius * radius
                && x >= 0
                && y >= 0
                && (x as u64) < image.width() as u64
                && (y as u64) < image.height() as u64
            {
                image.set_pixel(x as u32, y as u32, color);
            }
        }
    }
}

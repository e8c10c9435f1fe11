//! Shows how the probabilistic Hough transform handles broken lines:
//! dashes separated by less than the configured maximum gap fuse into
//! one segment spanning the whole line, while wider gaps split it. This
//! is what lets the detector ride over specular dropouts and scuffed
//! paint without losing the line.
//!
//! ```text
//! cargo run --example hough_gaps
//! ```

use linetrace::detection::{hough_lines, HoughParams};
use linetrace::imaging::BinaryMask;

const W: u32 = 400;
const H: u32 = 41;
const DASH: u32 = 45;
const ROW: u32 = 20;

/// Dashed horizontal line: 45 px dashes separated by `gap` px, starting
/// at x = 10, as many dashes as fit.
fn dashed_mask(gap: u32) -> BinaryMask {
    let mut mask = BinaryMask::zeros(W, H).expect("mask dimensions are valid");
    let mut x = 10;
    while x + DASH <= W - 10 {
        for dx in 0..DASH {
            mask.set(x + dx, ROW, true);
        }
        x += DASH + gap;
    }
    mask
}

fn main() {
    // Stock parameters bridge gaps up to 50 px.
    let params = HoughParams::default();

    println!("dash length {DASH} px, image {W}x{H} px");
    println!();
    println!("gap px   dashes   segments   longest px   extent covered");
    for gap in [0u32, 10, 30, 50, 60, 90] {
        let mask = dashed_mask(gap);
        let dashes = (W - 20 + gap) / (DASH + gap);
        let segments = hough_lines(&mask, &params);
        let longest = segments.iter().map(|s| s.length()).fold(0.0, f64::max);
        // Extent of lit pixels: first dash start to last dash end.
        let extent = (dashes * DASH + (dashes - 1) * gap) as f64;
        println!(
            "{gap:6}   {dashes:6}   {:8}   {longest:10.0}   {:.0}%",
            segments.len(),
            100.0 * longest / extent
        );
    }
    println!();
    println!("gaps up to the 50 px limit fuse into one segment; wider gaps split");
}

//! Feeds the centroid tracker a noisy synthetic trajectory and shows
//! what the constant-velocity Kalman filter buys: frame-to-frame jitter
//! drops by an order of magnitude, position error shrinks, and a burst
//! of missed detections is coasted through instead of losing the track.
//!
//! ```text
//! cargo run --example kalman_smoothing
//! ```

use linetrace::detection::Centroid;
use linetrace::tracking::{CentroidTrack, TrackerConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FRAMES: usize = 500;
const SIGMA: f64 = 5.0;
/// Detections vanish for these frames (a dropout shorter than the
/// tracker's coast budget, so the track must survive it).
const DROPOUT: std::ops::Range<usize> = 300..310;

fn main() {
    let cfg = TrackerConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut noise = move || {
        // Box-Muller, zero mean, sigma = SIGMA.
        let u1: f64 = rng.random_range(f64::EPSILON..1.0);
        let u2: f64 = rng.random_range(0.0..1.0);
        SIGMA * (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    };
    // Slow sinusoidal drift across the frame, the kind of motion the
    // centroid makes while the vehicle corrects its heading. Kept gentle:
    // a constant-velocity filter tracks slow curvature well but lags hard
    // maneuvers.
    let truth = |k: usize| {
        let t = k as f64 * cfg.dt;
        Centroid { cx: 320.0 + 50.0 * (0.1 * t).sin(), cy: 240.0 + 1.5 * t }
    };

    let z0 = Centroid { cx: truth(0).cx + noise(), cy: truth(0).cy + noise() };
    let mut track = CentroidTrack::init_from(z0, &cfg);
    let mut raw: Vec<Option<Centroid>> = vec![Some(z0)];
    let mut filtered = vec![(z0.cx, z0.cy)];
    let mut dropout_rows = Vec::new();

    for k in 1..FRAMES {
        let z = (!DROPOUT.contains(&k)).then(|| {
            let t = truth(k);
            Centroid { cx: t.cx + noise(), cy: t.cy + noise() }
        });
        let (next, out) = track.step(z).expect("model dimensions are consistent");
        track = next;
        raw.push(z);
        filtered.push((out.cx, out.cy));
        if (DROPOUT.start - 1..DROPOUT.end + 2).contains(&k) {
            dropout_rows.push((k, z, out));
        }
    }

    // Frame-to-frame increments measure jitter; compare their variance.
    let variance = |values: &[f64]| {
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / values.len() as f64
    };
    let skip = 50; // let the filter converge first
    let raw_inc: Vec<f64> = (skip..FRAMES)
        .filter_map(|k| Some(raw[k]?.cx - raw[k - 1]?.cx))
        .collect();
    let filt_inc: Vec<f64> =
        (skip..FRAMES).map(|k| filtered[k].0 - filtered[k - 1].0).collect();

    // Root-mean-square error against the noise-free trajectory.
    let rmse = |err2: &[f64]| (err2.iter().sum::<f64>() / err2.len() as f64).sqrt();
    let raw_err: Vec<f64> = (skip..FRAMES)
        .filter_map(|k| {
            let z = raw[k]?;
            let t = truth(k);
            Some((z.cx - t.cx).powi(2) + (z.cy - t.cy).powi(2))
        })
        .collect();
    let filt_err: Vec<f64> = (skip..FRAMES)
        .map(|k| {
            let t = truth(k);
            (filtered[k].0 - t.cx).powi(2) + (filtered[k].1 - t.cy).powi(2)
        })
        .collect();

    println!("frames: {FRAMES}, measurement noise sigma: {SIGMA} px");
    println!();
    println!("                      raw        filtered   ratio");
    println!(
        "increment variance  {:8.3}    {:8.3}    {:.3}",
        variance(&raw_inc),
        variance(&filt_inc),
        variance(&filt_inc) / variance(&raw_inc)
    );
    println!(
        "rmse vs truth       {:8.3}    {:8.3}    {:.3}",
        rmse(&raw_err),
        rmse(&filt_err),
        rmse(&filt_err) / rmse(&raw_err)
    );

    println!();
    println!("dropout: no detections on frames {}..{}", DROPOUT.start, DROPOUT.end);
    println!("frame   raw centroid        filtered            truth               valid");
    for (k, z, out) in dropout_rows {
        let t = truth(k);
        let raw_s = match z {
            Some(c) => format!("({:6.1}, {:6.1})", c.cx, c.cy),
            None => "--".to_string(),
        };
        println!(
            "{k:5}   {raw_s:18}  ({:6.1}, {:6.1})    ({:6.1}, {:6.1})    {}",
            out.cx, out.cy, t.cx, t.cy, out.valid
        );
    }
}

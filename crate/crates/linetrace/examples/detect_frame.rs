//! Walks one camera frame through every stage of the line detector:
//! HSV thresholding, morphological denoising, Canny edges, Hough
//! segments, and the final centroid. Prints per-stage statistics and
//! writes the stage images next to the example's temp directory.
//!
//! ```text
//! cargo run --example detect_frame
//! ```

use linetrace::detection::{detect_stages, DetectionConfig};
use linetrace::harness::img_io::{draw_disc, draw_line, save_pbm, save_ppm};
use linetrace::simworld::{build_environment, render_camera, CameraModel, EnvId, MavState};

fn main() {
    let world = build_environment(EnvId::Env1);
    let camera = CameraModel::default();
    // Hover over the first leg, slightly right of the line and yawed a
    // touch so the frame is not trivially symmetric.
    let state = MavState {
        x: 1.0,
        y: -0.08,
        z: 1.0,
        yaw: 0.12,
        vx: 0.0,
        yaw_rate: 0.0,
        vz: 0.0,
    };
    let frame = render_camera(&world, &camera, &state).expect("camera is airborne");

    let config = DetectionConfig::default();
    let stages = detect_stages(&frame, &config).expect("frame dimensions are valid");

    let total = (frame.width() * frame.height()) as f64;
    println!("frame:     {}x{} px", frame.width(), frame.height());
    println!(
        "mask:      {} px set ({:.1}% of frame)",
        stages.mask.count_ones(),
        100.0 * stages.mask.count_ones() as f64 / total
    );
    println!("edges:     {} px set", stages.edges.count_ones());
    println!("segments:  {}", stages.result.segments.len());
    for (i, seg) in stages.result.segments.iter().enumerate() {
        let dx = (seg.x2 - seg.x1) as f64;
        let dy = (seg.y2 - seg.y1) as f64;
        println!(
            "  #{i}: ({},{}) -> ({},{})  len {:.0} px  angle {:.1} deg",
            seg.x1,
            seg.y1,
            seg.x2,
            seg.y2,
            dx.hypot(dy),
            dy.atan2(dx).to_degrees()
        );
    }
    match stages.result.centroid {
        Some(c) => println!("centroid:  ({:.2}, {:.2}) px", c.cx, c.cy),
        None => println!("centroid:  none"),
    }
    println!("pipeline:  {:.2} ms", stages.result.timing * 1e3);

    // Dump the stages for inspection: the mask and edges as bitmaps and
    // the input with segments (red) and centroid (blue) drawn in.
    let out = std::env::temp_dir().join("linetrace_detect_frame");
    std::fs::create_dir_all(&out).expect("temp dir is writable");
    save_ppm(&out.join("frame.ppm"), &frame).expect("write frame");
    save_pbm(&out.join("mask.pbm"), &stages.mask).expect("write mask");
    save_pbm(&out.join("edges.pbm"), &stages.edges).expect("write edges");
    let mut overlay = frame;
    for seg in &stages.result.segments {
        draw_line(
            &mut overlay,
            (seg.x1 as i64, seg.y1 as i64),
            (seg.x2 as i64, seg.y2 as i64),
            (255, 0, 0),
        );
    }
    if let Some(c) = stages.result.centroid {
        draw_disc(&mut overlay, (c.cx.round() as i64, c.cy.round() as i64), 4, (0, 0, 255));
    }
    save_ppm(&out.join("overlay.ppm"), &overlay).expect("write overlay");
    println!("stage images: {}", out.display());
}

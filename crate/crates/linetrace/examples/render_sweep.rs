//! Renders the oval world from a sweep of altitudes and runs the line
//! detector on each frame, printing how the line footprint and the
//! detection respond to height.
//!
//! ```text
//! cargo run --release --example render_sweep
//! ```

use std::time::Instant;

use linetrace::detection::{detect_line, DetectionConfig};
use linetrace::simworld::{build_environment, render_camera, CameraModel, EnvId, MavState};

fn main() {
    let world = build_environment(EnvId::Env2);
    let camera = CameraModel::default();
    let config = DetectionConfig::default();

    println!("altitude  m/px     line px  segments  centroid            render   detect");
    for tenths in [3u32, 5, 8, 10, 15, 20] {
        let z = tenths as f64 / 10.0;
        let state = MavState {
            x: world.start.x,
            y: world.start.y,
            z,
            yaw: world.start_yaw,
            vx: 0.0,
            yaw_rate: 0.0,
            vz: 0.0,
        };

        let t0 = Instant::now();
        let frame = render_camera(&world, &camera, &state).expect("camera is airborne");
        let render_ms = t0.elapsed().as_secs_f64() * 1e3;

        let line_px = frame
            .as_raw()
            .chunks_exact(3)
            .filter(|c| (c[0], c[1], c[2]) == world.line_color)
            .count();

        let t1 = Instant::now();
        let result = detect_line(&frame, &config).expect("frame is large enough");
        let detect_ms = t1.elapsed().as_secs_f64() * 1e3;

        let centroid = match result.centroid {
            Some(c) => format!("({:6.1}, {:6.1})", c.cx, c.cy),
            None => "none".to_string(),
        };
        println!(
            "{z:5.1} m  {:6.4}  {line_px:8}  {:8}  {centroid:18}  {render_ms:5.1} ms {detect_ms:5.1} ms",
            camera.meters_per_pixel(z),
            result.segments.len(),
        );
    }
}

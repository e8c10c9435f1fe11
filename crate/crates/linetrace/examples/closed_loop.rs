//! Flies a full closed-loop mission in one of the built-in worlds with
//! the stock configuration: takeoff, line acquisition, cruise through
//! every corner or arc, and landing detection at the end of the path.
//! Prints the run metrics and a coarse map of the flown trajectory.
//!
//! ```text
//! cargo run --release --example closed_loop            # L-shaped course
//! cargo run --release --example closed_loop -- env2    # closed oval
//! ```

use std::time::Instant;

use linetrace::harness::{compute_metrics, metrics_to_text, run, RunConfig, WorldChoice};
use linetrace::simworld::EnvId;

const MAP_W: usize = 64;
const MAP_H: usize = 22;

fn main() {
    let env = match std::env::args().nth(1).as_deref() {
        None | Some("env1") => EnvId::Env1,
        Some("env2") => EnvId::Env2,
        Some(other) => {
            eprintln!("unknown world {other:?}; expected env1 or env2");
            std::process::exit(2);
        }
    };

    let config = RunConfig { world: WorldChoice::BuiltIn(env), ..RunConfig::default() };
    let world = config.resolve_world().expect("built-in worlds always resolve");
    println!(
        "world: {} ({} elements, path length {:.2} m, {})",
        world.name,
        world.elements.len(),
        world.length(),
        if world.is_closed() { "closed loop" } else { "open path" }
    );

    let t0 = Instant::now();
    let log = run(&world, &config).expect("stock configuration is valid");
    let wall = t0.elapsed().as_secs_f64();

    println!(
        "termination: {} after {} frames ({:.1} s simulated, {:.1} s wall)",
        log.termination,
        log.records.len(),
        log.records.last().map_or(0.0, |r| r.t),
        wall
    );
    println!();
    print!("{}", metrics_to_text(&compute_metrics(&log.records, Some(&world))));

    // Coarse trajectory map: path centerline as dots, flight as stars.
    let (min_x, min_y, max_x, max_y) = world.bounds;
    let mut grid = vec![vec![' '; MAP_W]; MAP_H];
    let mut mark = |x: f64, y: f64, glyph: char| {
        let col = ((x - min_x) / (max_x - min_x) * (MAP_W - 1) as f64).round();
        let row = ((y - min_y) / (max_y - min_y) * (MAP_H - 1) as f64).round();
        if (0.0..MAP_W as f64).contains(&col) && (0.0..MAP_H as f64).contains(&row) {
            // Rows print top-down; world y grows upward.
            grid[MAP_H - 1 - row as usize][col as usize] = glyph;
        }
    };
    for element in &world.elements {
        let steps = (element.length() * 40.0).ceil() as usize;
        for i in 0..=steps {
            let p = element.point_at(i as f64 / steps as f64);
            mark(p.x, p.y, '.');
        }
    }
    for record in &log.records {
        mark(record.x, record.y, '*');
    }
    println!();
    println!("trajectory (* flight, . path centerline):");
    for row in grid {
        println!("  {}", row.into_iter().collect::<String>());
    }
}

//! Serializes both built-in worlds to the flat world-file format and
//! parses them back, printing each file and the round-trip check. World
//! files keep every length in meters and every angle in degrees, so the
//! emitted text is also a readable description of the course.
//!
//! ```text
//! cargo run --example emit_worlds
//! ```

use linetrace::simworld::{build_environment, EnvId, WorldSpec};

fn main() {
    for env in [EnvId::Env1, EnvId::Env2] {
        let world = build_environment(env);
        let text = world.to_world_file();
        println!("==== {} ====", world.name);
        print!("{text}");

        let reparsed = WorldSpec::from_world_file(&text).expect("emitted files parse back");
        println!(
            "round trip: {} elements, length {:.6} m -> {} elements, length {:.6} m",
            world.elements.len(),
            world.length(),
            reparsed.elements.len(),
            reparsed.length()
        );
        assert_eq!(world.elements.len(), reparsed.elements.len());
        assert!((world.length() - reparsed.length()).abs() < 1e-9);
        assert!(
            (world.start_yaw - reparsed.start_yaw).abs() < 1e-12,
            "start yaw must survive the degree round trip"
        );
        println!();
    }
}

//! Command line front end.
//!
//! Four subcommands cover the operational surface: `run` flies a
//! closed-loop simulation and writes its artifacts, `detect` exercises
//! the detector on a single PPM frame, `world emit` exports a built-in
//! environment as an editable world file, and `metrics` recomputes
//! summary statistics from a previously written log.
//!
//! Every failure path exits with status 2 and a one-line message on
//! stderr; success is status 0.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::detection::detect_stages;
use crate::harness::config::RunConfig;
use crate::harness::csvlog::{log_to_csv, records_from_csv};
use crate::harness::img_io::{draw_disc, draw_line, load_ppm, save_pbm, save_ppm};
use crate::harness::metrics::{compute_metrics, metrics_to_text};
use crate::harness::plots::{altitude_svg, centroid_svg, heading_speed_svg, trajectory_svg};
use crate::harness::runner::run_with_frames;
use crate::harness::HarnessError;
use crate::simworld::{build_environment, EnvId};

/// Environment variable consulted for the master seed when `--seed` is
/// absent.
pub const SEED_ENV_VAR: &str = "LINETRACE_SEED";

#[derive(Parser)]
#[command(name = "linetrace", version, about = "Vision-guided line following simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fly a closed-loop run and write log, metrics and plots.
    Run {
        /// Run configuration file.
        #[arg(long)]
        config: PathBuf,
        /// Master seed override; beats LINETRACE_SEED and the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory, created if missing; defaults to the
        /// config's outputs.directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the detector on one PPM frame and dump its stages.
    Detect {
        /// Input frame, binary PPM (P6).
        #[arg(long)]
        image: PathBuf,
        /// Run configuration file (detection section applies).
        #[arg(long)]
        config: PathBuf,
        /// Output directory, created if missing.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// World file tools.
    #[command(subcommand)]
    World(WorldCommand),
    /// Recompute metrics from a previously written run log.
    Metrics {
        /// CSV log written by `run`.
        #[arg(long)]
        log: PathBuf,
        /// Config of the original run; supplies the world so
        /// path-relative metrics can be recomputed.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum WorldCommand {
    /// Write a built-in environment as a world file.
    Emit {
        /// Which environment: env1 or env2.
        #[arg(long)]
        env: EnvId,
        /// Destination file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Entry point used by the binary; returns the process exit code.
pub fn run_cli() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes; usage errors are
            // not.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn execute(command: Command) -> Result<(), HarnessError> {
    match command {
        Command::Run { config, seed, out } => cmd_run(&config, seed, out.as_deref()),
        Command::Detect { image, config, out } => cmd_detect(&image, &config, &out),
        Command::World(WorldCommand::Emit { env, out }) => cmd_world_emit(env, out.as_deref()),
        Command::Metrics { log, config } => cmd_metrics(&log, config.as_deref()),
    }
}

/// Seed precedence: `--seed` flag, then the environment variable, then
/// the config file value.
fn resolve_seed(
    flag: Option<u64>,
    env_value: Option<&str>,
    config_seed: u64,
) -> Result<u64, HarnessError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match env_value {
        Some(text) => text.trim().parse().map_err(|_| HarnessError::Config {
            line: 0,
            message: format!("{SEED_ENV_VAR} must be a nonnegative integer, got `{text}`"),
        }),
        None => Ok(config_seed),
    }
}

fn seed_from_process_env() -> Result<Option<String>, HarnessError> {
    match std::env::var_os(SEED_ENV_VAR) {
        None => Ok(None),
        Some(os) => os.into_string().map(Some).map_err(|_| HarnessError::Config {
            line: 0,
            message: format!("{SEED_ENV_VAR} is not valid UTF-8"),
        }),
    }
}

fn cmd_run(config_path: &Path, seed: Option<u64>, out: Option<&Path>) -> Result<(), HarnessError> {
    let mut config = RunConfig::load(config_path)?;
    let env_seed = seed_from_process_env()?;
    config.sim.seed = resolve_seed(seed, env_seed.as_deref(), config.sim.seed)?;
    let world = config.resolve_world()?;
    let out = out.unwrap_or(&config.outputs.directory);
    fs::create_dir_all(out)?;

    let stride = config.outputs.frame_stride;
    let log = run_with_frames(&world, &config, |frame, image| {
        if stride > 0 && frame % stride == 0 {
            save_ppm(&out.join(format!("frame_{frame:06}.ppm")), image)?;
        }
        Ok(())
    })?;

    fs::write(out.join("run_log.csv"), log_to_csv(&log.records))?;
    let metrics = compute_metrics(&log.records, Some(&world));
    fs::write(out.join("metrics.txt"), metrics_to_text(&metrics))?;
    if config.outputs.plots {
        fs::write(out.join("trajectory.svg"), trajectory_svg(&world, &log.records))?;
        fs::write(
            out.join("altitude.svg"),
            altitude_svg(&log.records, config.nav.target_altitude),
        )?;
        fs::write(out.join("heading_speed.svg"), heading_speed_svg(&log.records))?;
        fs::write(
            out.join("centroid.svg"),
            centroid_svg(&log.records, config.camera.width(), config.nav.deadband_fraction),
        )?;
    }

    println!("world: {}", log.world_name);
    println!("seed: {}", config.sim.seed);
    println!("termination: {}", log.termination);
    println!("frames: {}", log.records.len());
    println!("traversed: {:.3} m of {:.3} m", log.traversed, world.length());
    println!("outputs: {}", out.display());
    Ok(())
}

fn cmd_detect(image: &Path, config_path: &Path, out: &Path) -> Result<(), HarnessError> {
    let config = RunConfig::load(config_path)?;
    let frame = load_ppm(image)?;
    let stages = detect_stages(&frame, &config.detection)?;

    fs::create_dir_all(out)?;
    save_pbm(&out.join("mask.pbm"), &stages.mask)?;
    save_pbm(&out.join("edges.pbm"), &stages.edges)?;

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
    save_ppm(&out.join("overlay.ppm"), &overlay)?;

    println!("segments: {}", stages.result.segments.len());
    match stages.result.centroid {
        Some(c) => println!("centroid: {:.2} {:.2}", c.cx, c.cy),
        None => println!("centroid: none"),
    }
    println!("outputs: {}", out.display());
    Ok(())
}

fn cmd_world_emit(env: EnvId, out: Option<&Path>) -> Result<(), HarnessError> {
    let text = build_environment(env).to_world_file();
    match out {
        Some(path) => {
            fs::write(path, text)?;
            println!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_metrics(log: &Path, config: Option<&Path>) -> Result<(), HarnessError> {
    let records = records_from_csv(&fs::read_to_string(log)?)?;
    let world = match config {
        Some(path) => Some(RunConfig::load(path)?.resolve_world()?),
        None => None,
    };
    let metrics = compute_metrics(&records, world.as_ref());
    print!("{}", metrics_to_text(&metrics));
    Ok(())
}

//! Flat text format for world descriptions.
//!
//! One `key = value` pair per line; `#` lines are comments. `world.*`
//! keys may each appear once and all have defaults; `path.segment` and
//! `path.arc` lines repeat, one per element, in traversal order. All
//! lengths are in meters and all angles in the file are in degrees
//! (converted to radians on load); floats are printed in shortest
//! round-trip form.
//!
//! ```text
//! world.name = env1
//! world.line_width = 0.15
//! world.line_color = 255,255,0
//! world.floor_color = 96,96,96
//! world.bounds = -1,-1,5,5.5
//! world.start = 0,0
//! world.start_yaw = 0               # degrees
//! path.segment = 0,0,4,0            # x1,y1,x2,y2
//! path.arc = 0.9,0,1.5,53,106,cw    # cx,cy,radius,start_deg,sweep_deg,cw|ccw
//! ```

use nalgebra::Point2;

use crate::simworld::{ArcDirection, PathElement, SimError, WorldSpec};

pub(super) fn emit(world: &WorldSpec) -> String {
    let mut out = String::new();
    let push = |out: &mut String, key: &str, value: String| {
        out.push_str(key);
        out.push_str(" = ");
        out.push_str(&value);
        out.push('\n');
    };
    push(&mut out, "world.name", world.name.clone());
    push(&mut out, "world.line_width", world.line_width.to_string());
    let (lr, lg, lb) = world.line_color;
    push(&mut out, "world.line_color", format!("{lr},{lg},{lb}"));
    let (fr, fg, fb) = world.floor_color;
    push(&mut out, "world.floor_color", format!("{fr},{fg},{fb}"));
    let b = world.bounds;
    push(&mut out, "world.bounds", format!("{},{},{},{}", b.0, b.1, b.2, b.3));
    push(&mut out, "world.start", format!("{},{}", world.start.x, world.start.y));
    push(&mut out, "world.start_yaw", world.start_yaw.to_degrees().to_string());
    for element in &world.elements {
        match element {
            PathElement::Segment { start, end } => {
                push(
                    &mut out,
                    "path.segment",
                    format!("{},{},{},{}", start.x, start.y, end.x, end.y),
                );
            }
            PathElement::Arc { center, radius, start_angle, sweep, direction } => {
                let dir = match direction {
                    ArcDirection::Cw => "cw",
                    ArcDirection::Ccw => "ccw",
                };
                let (start_deg, sweep_deg) = (start_angle.to_degrees(), sweep.to_degrees());
                push(
                    &mut out,
                    "path.arc",
                    format!("{},{},{radius},{start_deg},{sweep_deg},{dir}", center.x, center.y),
                );
            }
        }
    }
    out
}

fn parse_floats(value: &str, expect: usize, line: usize) -> Result<Vec<f64>, SimError> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    if parts.len() != expect {
        return Err(SimError::Parse {
            line,
            message: format!("expected {expect} comma-separated values, got {}", parts.len()),
        });
    }
    parts
        .iter()
        .map(|p| {
            p.parse::<f64>().map_err(|_| SimError::Parse {
                line,
                message: format!("`{p}` is not a number"),
            })
        })
        .collect()
}

fn parse_color(value: &str, line: usize) -> Result<(u8, u8, u8), SimError> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(SimError::Parse {
            line,
            message: format!("expected r,g,b, got {} values", parts.len()),
        });
    }
    let mut rgb = [0u8; 3];
    for (slot, p) in rgb.iter_mut().zip(&parts) {
        *slot = p.parse::<u8>().map_err(|_| SimError::Parse {
            line,
            message: format!("`{p}` is not an intensity in 0..=255"),
        })?;
    }
    Ok((rgb[0], rgb[1], rgb[2]))
}

pub(super) fn parse(text: &str) -> Result<WorldSpec, SimError> {
    let mut name: Option<String> = None;
    let mut line_width: Option<f64> = None;
    let mut line_color: Option<(u8, u8, u8)> = None;
    let mut floor_color: Option<(u8, u8, u8)> = None;
    let mut bounds: Option<(f64, f64, f64, f64)> = None;
    let mut start: Option<Point2<f64>> = None;
    let mut start_yaw: Option<f64> = None;
    let mut elements: Vec<PathElement> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, value) = trimmed.split_once('=').ok_or_else(|| SimError::Parse {
            line,
            message: "expected `key = value`".into(),
        })?;
        let key = key.trim();
        let value = value.trim();

        // Single-valued keys reject repeats so silent overrides can't hide
        // a copy-paste mistake.
        fn put<T>(slot: &mut Option<T>, value: T, key: &str, line: usize) -> Result<(), SimError> {
            if slot.is_some() {
                return Err(SimError::Parse { line, message: format!("duplicate key `{key}`") });
            }
            *slot = Some(value);
            Ok(())
        }

        match key {
            "world.name" => put(&mut name, value.to_string(), key, line)?,
            "world.line_width" => {
                let v = parse_floats(value, 1, line)?;
                put(&mut line_width, v[0], key, line)?;
            }
            "world.line_color" => put(&mut line_color, parse_color(value, line)?, key, line)?,
            "world.floor_color" => put(&mut floor_color, parse_color(value, line)?, key, line)?,
            "world.bounds" => {
                let v = parse_floats(value, 4, line)?;
                put(&mut bounds, (v[0], v[1], v[2], v[3]), key, line)?;
            }
            "world.start" => {
                let v = parse_floats(value, 2, line)?;
                put(&mut start, Point2::new(v[0], v[1]), key, line)?;
            }
            "world.start_yaw" => {
                let v = parse_floats(value, 1, line)?;
                put(&mut start_yaw, v[0].to_radians(), key, line)?;
            }
            "path.segment" => {
                let v = parse_floats(value, 4, line)?;
                elements.push(PathElement::Segment {
                    start: Point2::new(v[0], v[1]),
                    end: Point2::new(v[2], v[3]),
                });
            }
            "path.arc" => {
                let parts: Vec<&str> = value.split(',').map(str::trim).collect();
                if parts.len() != 6 {
                    return Err(SimError::Parse {
                        line,
                        message: format!(
                            "expected cx,cy,radius,start_deg,sweep_deg,cw|ccw, got {} values",
                            parts.len()
                        ),
                    });
                }
                let nums = parse_floats(&parts[..5].join(","), 5, line)?;
                let direction = match parts[5] {
                    "cw" => ArcDirection::Cw,
                    "ccw" => ArcDirection::Ccw,
                    other => {
                        return Err(SimError::Parse {
                            line,
                            message: format!("arc direction must be cw or ccw, got `{other}`"),
                        })
                    }
                };
                elements.push(PathElement::Arc {
                    center: Point2::new(nums[0], nums[1]),
                    radius: nums[2],
                    start_angle: nums[3].to_radians(),
                    sweep: nums[4].to_radians(),
                    direction,
                });
            }
            other => {
                return Err(SimError::Parse { line, message: format!("unknown key `{other}`") });
            }
        }
    }

    if elements.is_empty() {
        return Err(SimError::InvalidWorld("path has no elements".into()));
    }
    let first = elements[0].clone();
    let world = WorldSpec {
        name: name.unwrap_or_else(|| "custom".into()),
        line_width: line_width.unwrap_or(0.15),
        line_color: line_color.unwrap_or((255, 255, 0)),
        floor_color: floor_color.unwrap_or((96, 96, 96)),
        bounds: bounds.unwrap_or_else(|| {
            let mut acc = elements[0].bounds(1.0);
            for e in &elements[1..] {
                let b = e.bounds(1.0);
                acc = (acc.0.min(b.0), acc.1.min(b.1), acc.2.max(b.2), acc.3.max(b.3));
            }
            acc
        }),
        start: start.unwrap_or_else(|| first.start_point()),
        start_yaw: start_yaw.unwrap_or_else(|| first.heading_at(0.0)),
        elements,
    };
    world.validate()?;
    Ok(world)
}

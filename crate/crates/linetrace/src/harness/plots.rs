//! Hand-rolled SVG plots for run inspection.
//!
//! Each builder returns a complete standalone document. Output is fully
//! deterministic: floats go through the same 6-significant-digit
//! formatter as the CSV log, series are emitted in a fixed order, and
//! empty series are omitted rather than rendered as empty elements.

use nalgebra::Point2;

use crate::harness::fmt_sig;
use crate::harness::runner::RunRecord;
use crate::simworld::{ArcDirection, PathElement, WorldSpec};

const CHART_W: f64 = 800.0;
const CHART_H: f64 = 360.0;
const MARGIN: f64 = 54.0;

const BLUE: &str = "#1f6fb2";
const ORANGE: &str = "#e07b00";
const RED: &str = "#cc3333";
const GREEN: &str = "#2a9d2a";
const LINE_YELLOW: &str = "#d4b106";
const GRAY: &str = "#888888";
const BAND: &str = "#dddddd";

fn svg_doc(width: f64, height: f64, body: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" \
         viewBox=\"0 0 {w} {h}\" font-family=\"monospace\" font-size=\"12\">\n\
         <rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n{body}</svg>\n",
        w = fmt_sig(width),
        h = fmt_sig(height),
    )
}

/// Collects maximal runs of consecutive frames where `pick` yields a
/// value, so gappy series render as separate strokes instead of bogus
/// bridges.
fn runs(records: &[RunRecord], pick: impl Fn(&RunRecord) -> Option<(f64, f64)>) -> Vec<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    for record in records {
        match pick(record) {
            Some(p) => current.push(p),
            None => {
                if !current.is_empty() {
                    out.push(std::mem::take(&mut current));
                }
            }
        }
    }
    if !current.is_empty() {
        out.push(current);
    }
    out
}

/// One xy chart area inside a document, with linear axes and a frame.
struct Chart {
    x: (f64, f64),
    y: (f64, f64),
    top: f64,
    body: String,
}

/// Widens a degenerate range so the chart never divides by zero.
fn pad_range((lo, hi): (f64, f64)) -> (f64, f64) {
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, lo + 0.5)
    }
}

impl Chart {
    fn new(top: f64, x: (f64, f64), y: (f64, f64)) -> Self {
        Self { x: pad_range(x), y: pad_range(y), top, body: String::new() }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let px = MARGIN + (x - self.x.0) / (self.x.1 - self.x.0) * (CHART_W - 2.0 * MARGIN);
        let py = self.top + CHART_H - MARGIN
            - (y - self.y.0) / (self.y.1 - self.y.0) * (CHART_H - 2.0 * MARGIN);
        (px, py)
    }

    fn frame(&mut self, title: &str, x_label: &str, y_label: &str) {
        let (left, bottom) = self.map(self.x.0, self.y.0);
        let (right, top) = self.map(self.x.1, self.y.1);
        let b = &mut self.body;
        b.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
            fmt_sig(left),
            fmt_sig(top),
            fmt_sig(right - left),
            fmt_sig(bottom - top),
        ));
        b.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"14\">{title}</text>\n",
            fmt_sig((left + right) / 2.0),
            fmt_sig(top - 10.0),
        ));
        b.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{x_label}</text>\n",
            fmt_sig((left + right) / 2.0),
            fmt_sig(bottom + 34.0),
        ));
        b.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 {} {})\">{y_label}</text>\n",
            fmt_sig(left - 40.0),
            fmt_sig((top + bottom) / 2.0),
            fmt_sig(left - 40.0),
            fmt_sig((top + bottom) / 2.0),
        ));
        // Corner tick values, enough to read scales off the frame.
        b.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
            fmt_sig(left),
            fmt_sig(bottom + 16.0),
            fmt_sig(self.x.0),
        ));
        b.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
            fmt_sig(right),
            fmt_sig(bottom + 16.0),
            fmt_sig(self.x.1),
        ));
        b.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n",
            fmt_sig(left - 6.0),
            fmt_sig(bottom + 4.0),
            fmt_sig(self.y.0),
        ));
        b.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n",
            fmt_sig(left - 6.0),
            fmt_sig(top + 4.0),
            fmt_sig(self.y.1),
        ));
    }

    fn points_attr(&self, pts: &[(f64, f64)]) -> String {
        let mut s = String::new();
        for (i, &(x, y)) in pts.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            let (px, py) = self.map(x, y);
            s.push_str(&fmt_sig(px));
            s.push(',');
            s.push_str(&fmt_sig(py));
        }
        s
    }

    fn polyline(&mut self, pts: &[(f64, f64)], color: &str, dashed: bool) {
        if pts.is_empty() {
            return;
        }
        let dash = if dashed { " stroke-dasharray=\"6 4\"" } else { "" };
        let points = self.points_attr(pts);
        self.body.push_str(&format!(
            "<polyline points=\"{points}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"{dash}/>\n",
        ));
    }

    fn dots(&mut self, pts: &[(f64, f64)], color: &str) {
        for &(x, y) in pts {
            let (px, py) = self.map(x, y);
            self.body.push_str(&format!(
                "<circle cx=\"{}\" cy=\"{}\" r=\"2\" fill=\"{color}\"/>\n",
                fmt_sig(px),
                fmt_sig(py),
            ));
        }
    }

    fn hline(&mut self, y: f64, color: &str) {
        let (x0, py) = self.map(self.x.0, y);
        let (x1, _) = self.map(self.x.1, y);
        self.body.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-dasharray=\"6 4\"/>\n",
            fmt_sig(x0),
            fmt_sig(py),
            fmt_sig(x1),
            fmt_sig(py),
        ));
    }

    fn band(&mut self, y_lo: f64, y_hi: f64, fill: &str) {
        let lo = y_lo.max(self.y.0);
        let hi = y_hi.min(self.y.1);
        if hi <= lo {
            return;
        }
        let (left, bottom) = self.map(self.x.0, lo);
        let (right, top) = self.map(self.x.1, hi);
        self.body.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{fill}\"/>\n",
            fmt_sig(left),
            fmt_sig(top),
            fmt_sig(right - left),
            fmt_sig(bottom - top),
        ));
    }

    fn legend(&mut self, entries: &[(&str, &str)]) {
        let (left, _) = self.map(self.x.0, self.y.1);
        for (i, (label, color)) in entries.iter().enumerate() {
            let y = self.top + MARGIN + 16.0 * i as f64;
            self.body.push_str(&format!(
                "<rect x=\"{}\" y=\"{}\" width=\"10\" height=\"10\" fill=\"{color}\"/>\n\
                 <text x=\"{}\" y=\"{}\">{label}</text>\n",
                fmt_sig(left + 8.0),
                fmt_sig(y - 9.0),
                fmt_sig(left + 22.0),
                fmt_sig(y),
            ));
        }
    }
}

fn min_max(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    values.fold(None, |acc, v| match acc {
        None => Some((v, v)),
        Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
    })
}

fn time_range(records: &[RunRecord]) -> (f64, f64) {
    (0.0, records.last().map_or(1.0, |r| r.t))
}

/// Top-down view: guide path centerline under the flown trajectory.
pub fn trajectory_svg(world: &WorldSpec, records: &[RunRecord]) -> String {
    const SCALE: f64 = 100.0; // px per meter
    const PAD: f64 = 0.5; // meters around the world bounds
    let (bx0, by0, bx1, by1) = world.bounds;
    let width = (bx1 - bx0 + 2.0 * PAD) * SCALE;
    let height = (by1 - by0 + 2.0 * PAD) * SCALE;
    // World y points up, document y points down: mirror about the top.
    let map = |p: Point2<f64>| ((p.x - bx0 + PAD) * SCALE, (by1 - p.y + PAD) * SCALE);

    let mut body = String::new();
    let mut d = String::new();
    for element in &world.elements {
        let (sx, sy) = map(element.start_point());
        d.push_str(&format!("M {} {} ", fmt_sig(sx), fmt_sig(sy)));
        match *element {
            PathElement::Segment { end, .. } => {
                let (ex, ey) = map(end);
                d.push_str(&format!("L {} {} ", fmt_sig(ex), fmt_sig(ey)));
            }
            PathElement::Arc { radius, sweep, direction, .. } => {
                let (ex, ey) = map(element.end_point());
                let large = if sweep > std::f64::consts::PI { 1 } else { 0 };
                // Mirroring flips handedness, so ccw in the world draws
                // with SVG sweep flag 0.
                let flag = match direction {
                    ArcDirection::Ccw => 0,
                    ArcDirection::Cw => 1,
                };
                let r = fmt_sig(radius * SCALE);
                d.push_str(&format!("A {r} {r} 0 {large} {flag} {} {} ", fmt_sig(ex), fmt_sig(ey)));
            }
        }
    }
    body.push_str(&format!(
        "<path d=\"{}\" fill=\"none\" stroke=\"{LINE_YELLOW}\" stroke-width=\"{}\"/>\n",
        d.trim_end(),
        fmt_sig(world.line_width * SCALE),
    ));

    let flight: Vec<(f64, f64)> = records.iter().map(|r| map(Point2::new(r.x, r.y))).collect();
    if !flight.is_empty() {
        let pts: Vec<String> =
            flight.iter().map(|&(x, y)| format!("{},{}", fmt_sig(x), fmt_sig(y))).collect();
        body.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{BLUE}\" stroke-width=\"2\"/>\n",
            pts.join(" "),
        ));
        let (sx, sy) = flight[0];
        let (ex, ey) = *flight.last().expect("nonempty");
        body.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"5\" fill=\"{GREEN}\"/>\n",
            fmt_sig(sx),
            fmt_sig(sy),
        ));
        body.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"5\" fill=\"{RED}\"/>\n",
            fmt_sig(ex),
            fmt_sig(ey),
        ));
    }
    svg_doc(width, height, &body)
}

/// Altitude against time with the cruise target marked.
pub fn altitude_svg(records: &[RunRecord], target_altitude: f64) -> String {
    let data: Vec<(f64, f64)> = records.iter().map(|r| (r.t, r.z)).collect();
    let y = min_max(data.iter().map(|&(_, z)| z).chain([target_altitude]))
        .expect("chained target makes this nonempty");
    let mut chart = Chart::new(0.0, time_range(records), y);
    chart.frame("altitude", "t [s]", "z [m]");
    chart.hline(target_altitude, RED);
    chart.polyline(&data, BLUE, false);
    svg_doc(CHART_W, CHART_H, &chart.body)
}

/// Heading and forward speed stacked over a shared time axis.
pub fn heading_speed_svg(records: &[RunRecord]) -> String {
    let t = time_range(records);
    let yaw: Vec<(f64, f64)> = records.iter().map(|r| (r.t, r.yaw.to_degrees())).collect();
    let vx: Vec<(f64, f64)> = records.iter().map(|r| (r.t, r.vx)).collect();

    let mut top = Chart::new(
        0.0,
        t,
        min_max(yaw.iter().map(|&(_, v)| v)).unwrap_or((0.0, 1.0)),
    );
    top.frame("heading", "t [s]", "yaw [deg]");
    top.polyline(&yaw, BLUE, false);

    let mut bottom = Chart::new(
        CHART_H,
        t,
        min_max(vx.iter().map(|&(_, v)| v)).unwrap_or((0.0, 1.0)),
    );
    bottom.frame("forward speed", "t [s]", "vx [m/s]");
    bottom.polyline(&vx, ORANGE, false);

    svg_doc(CHART_W, 2.0 * CHART_H, &format!("{}{}", top.body, bottom.body))
}

/// Raw detections (dots) against the filtered centroid (line), with the
/// steering deadband shaded. Takeoff frames carry no detections and the
/// gap structure of both series is preserved.
pub fn centroid_svg(records: &[RunRecord], frame_width: u32, deadband_fraction: f64) -> String {
    let center = (frame_width as f64 - 1.0) / 2.0;
    let deadband = deadband_fraction * frame_width as f64;
    let mut chart = Chart::new(0.0, time_range(records), (0.0, frame_width as f64));
    chart.frame("centroid column", "t [s]", "cx [px]");
    chart.band(center - deadband, center + deadband, BAND);
    chart.hline(center, GRAY);
    for run in runs(records, |r| r.kf.filter(|_| r.valid).map(|k| (r.t, k.0))) {
        chart.polyline(&run, BLUE, false);
    }
    let raw: Vec<(f64, f64)> =
        records.iter().filter_map(|r| r.raw.map(|c| (r.t, c.cx))).collect();
    chart.dots(&raw, ORANGE);
    chart.legend(&[("raw", ORANGE), ("filtered", BLUE)]);
    svg_doc(CHART_W, CHART_H, &chart.body)
}

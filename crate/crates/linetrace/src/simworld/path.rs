//! Guide path geometry: straight segments and circular arcs.
//!
//! Angles are standard math angles in the world xy plane. An arc is
//! stored with a nonnegative sweep and an explicit orientation: `Ccw`
//! walks the parameter angle upward from `start_angle`, `Cw` walks it
//! downward. Headings returned by [`PathElement::heading_at`] follow the
//! vehicle convention (heading `psi` moves the vehicle along
//! `(cos psi, sin psi)`).

use nalgebra::{Point2, Vector2};

/// Orientation of an arc's parameter angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcDirection {
    /// Parameter angle increases along the path.
    Ccw,
    /// Parameter angle decreases along the path.
    Cw,
}

/// One piece of the guide path, traversed from parameter 0 to 1.
#[derive(Debug, Clone, PartialEq)]
pub enum PathElement {
    Segment {
        start: Point2<f64>,
        end: Point2<f64>,
    },
    Arc {
        center: Point2<f64>,
        radius: f64,
        /// Parameter angle of the arc's start point, radians.
        start_angle: f64,
        /// Nonnegative angular extent, radians.
        sweep: f64,
        direction: ArcDirection,
    },
}

/// Result of projecting a point onto a path: the closest approach and
/// how far along the path (in meters from its start) it occurs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathProjection {
    pub distance: f64,
    pub along: f64,
}

impl PathElement {
    pub fn length(&self) -> f64 {
        match self {
            PathElement::Segment { start, end } => (end - start).norm(),
            PathElement::Arc { radius, sweep, .. } => radius * sweep,
        }
    }

    /// Signed parameter angle at fraction `t` of an arc's sweep.
    fn arc_angle(start_angle: f64, sweep: f64, direction: ArcDirection, t: f64) -> f64 {
        match direction {
            ArcDirection::Ccw => start_angle + t * sweep,
            ArcDirection::Cw => start_angle - t * sweep,
        }
    }

    /// Point at fraction `t` in [0, 1] of the element.
    pub fn point_at(&self, t: f64) -> Point2<f64> {
        match *self {
            PathElement::Segment { start, end } => start + (end - start) * t,
            PathElement::Arc { center, radius, start_angle, sweep, direction } => {
                let a = Self::arc_angle(start_angle, sweep, direction, t);
                center + radius * Vector2::new(a.cos(), a.sin())
            }
        }
    }

    /// Vehicle heading when traversing the element at fraction `t`.
    pub fn heading_at(&self, t: f64) -> f64 {
        match *self {
            PathElement::Segment { start, end } => {
                let d = end - start;
                d.y.atan2(d.x)
            }
            PathElement::Arc { start_angle, sweep, direction, .. } => {
                let a = Self::arc_angle(start_angle, sweep, direction, t);
                match direction {
                    // Tangent of a rising parameter angle.
                    ArcDirection::Ccw => a + std::f64::consts::FRAC_PI_2,
                    ArcDirection::Cw => a - std::f64::consts::FRAC_PI_2,
                }
            }
        }
    }

    pub fn start_point(&self) -> Point2<f64> {
        self.point_at(0.0)
    }

    pub fn end_point(&self) -> Point2<f64> {
        self.point_at(1.0)
    }

    /// Closest approach of `p` to this element.
    pub fn project(&self, p: Point2<f64>) -> PathProjection {
        match *self {
            PathElement::Segment { start, end } => {
                let d = end - start;
                let len2 = d.norm_squared();
                let t = if len2 == 0.0 { 0.0 } else { ((p - start).dot(&d) / len2).clamp(0.0, 1.0) };
                let closest = start + d * t;
                PathProjection { distance: (p - closest).norm(), along: t * len2.sqrt() }
            }
            PathElement::Arc { center, radius, start_angle, sweep, direction } => {
                let rel = p - center;
                let angle = rel.y.atan2(rel.x);
                // Angular offset from the start, measured along the
                // traversal direction and normalized into [0, 2pi).
                let tau = std::f64::consts::TAU;
                let delta = match direction {
                    ArcDirection::Ccw => (angle - start_angle).rem_euclid(tau),
                    ArcDirection::Cw => (start_angle - angle).rem_euclid(tau),
                };
                if delta <= sweep {
                    PathProjection {
                        distance: (rel.norm() - radius).abs(),
                        along: delta * radius,
                    }
                } else {
                    // Off the swept sector: the nearest endpoint wins.
                    let d0 = (p - self.point_at(0.0)).norm();
                    let d1 = (p - self.point_at(1.0)).norm();
                    if d0 <= d1 {
                        PathProjection { distance: d0, along: 0.0 }
                    } else {
                        PathProjection { distance: d1, along: radius * sweep }
                    }
                }
            }
        }
    }

    /// Axis-aligned bounds of the element, padded by `margin` on every
    /// side. Arc bounds are the conservative full-circle box.
    pub fn bounds(&self, margin: f64) -> (f64, f64, f64, f64) {
        let (min_x, min_y, max_x, max_y) = match *self {
            PathElement::Segment { start, end } => (
                start.x.min(end.x),
                start.y.min(end.y),
                start.x.max(end.x),
                start.y.max(end.y),
            ),
            PathElement::Arc { center, radius, .. } => (
                center.x - radius,
                center.y - radius,
                center.x + radius,
                center.y + radius,
            ),
        };
        (min_x - margin, min_y - margin, max_x + margin, max_y + margin)
    }
}

/// Total length of a chain of elements.
pub fn path_length(elements: &[PathElement]) -> f64 {
    elements.iter().map(PathElement::length).sum()
}

/// Projects `p` onto a chain of elements. `along` is measured from the
/// start of the first element; ties go to the earliest element.
pub fn project_path(elements: &[PathElement], p: Point2<f64>) -> Option<PathProjection> {
    let mut best: Option<PathProjection> = None;
    let mut offset = 0.0;
    for element in elements {
        let local = element.project(p);
        let candidate = PathProjection { distance: local.distance, along: offset + local.along };
        if best.map_or(true, |b| candidate.distance < b.distance) {
            best = Some(candidate);
        }
        offset += element.length();
    }
    best
}

//! Planar geometry used for line-of-sight classification.
//!
//! Obstructions are simple polygons; a radio path is the straight segment
//! between two nodes. A path "crosses" a polygon when it intersects any edge
//! or has an endpoint inside (grazing a vertex counts as a crossing — the
//! conservative call for propagation).

use super::{Obstruction, ObstructionKind, Point};

/// Twice the signed area of triangle `a`, `b`, `c` (positive = counterclockwise).
fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

/// Whether `p`, known collinear with segment `ab`, lies within its box.
fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p[0] >= a[0].min(b[0])
        && p[0] <= a[0].max(b[0])
        && p[1] >= a[1].min(b[1])
        && p[1] <= a[1].max(b[1])
}

/// Whether segments `p1p2` and `q1q2` share any point, endpoints included.
pub fn segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

/// Even-odd ray-cast point-in-polygon test.
pub fn point_in_polygon(p: Point, polygon: &[Point]) -> bool {
    let n = polygon.len();
    if n < 3 {
        return false;
    }
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let [xi, yi] = polygon[i];
        let [xj, yj] = polygon[j];
        if (yi > p[1]) != (yj > p[1]) && p[0] < (xj - xi) * (p[1] - yi) / (yj - yi) + xi {
            inside = !inside;
        }
        j = i;
    }
    inside
}

/// Whether segment `ab` touches `polygon` (edge intersection or endpoint inside).
pub fn segment_crosses_polygon(a: Point, b: Point, polygon: &[Point]) -> bool {
    let n = polygon.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        if segments_intersect(a, b, polygon[i], polygon[(i + 1) % n]) {
            return true;
        }
    }
    point_in_polygon(a, polygon) || point_in_polygon(b, polygon)
}

/// What a straight path crosses, by obstruction kind.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Crossings {
    /// One entry per crossed opaque blocker: its penetration override, if any.
    pub building_losses: Vec<Option<f64>>,
    /// Crossed glass facades.
    pub glass: u32,
    /// Crossed interior walls.
    pub walls: u32,
}

/// Tallies every obstruction crossed by the path from `a` to `b`.
pub fn survey(a: Point, b: Point, obstructions: &[Obstruction]) -> Crossings {
    let mut crossings = Crossings::default();
    for obstruction in obstructions {
        if !segment_crosses_polygon(a, b, &obstruction.polygon) {
            continue;
        }
        match obstruction.kind {
            ObstructionKind::Building => {
                crossings.building_losses.push(obstruction.penetration_db)
            }
            ObstructionKind::GlassFacade => crossings.glass += 1,
            ObstructionKind::InteriorWall => crossings.walls += 1,
        }
    }
    crossings
}

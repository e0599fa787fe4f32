//! Sampling oracle for hull containment.
//!
//! Approximates every generator circle by a dense polygon, takes the planar
//! convex hull of all samples and tests sampled target points against it.
//! It shares no code with the support-function engine in [`crate::hull`],
//! which is what makes it useful as a cross-check.

use std::f64::consts::TAU;

use crate::geom::{Circle2, Point2};

/// Default samples per circle.
pub const SAMPLES_PER_CIRCLE: usize = 3600;

/// `n` evenly spaced points on the circle, or its center for radius 0.
pub fn sample_circle(c: &Circle2, n: usize) -> Vec<Point2> {
    if c.radius == 0.0 {
        return vec![c.center];
    }
    (0..n)
        .map(|i| {
            let t = TAU * i as f64 / n as f64;
            Point2::new(c.center.x + c.radius * t.cos(), c.center.y + c.radius * t.sin())
        })
        .collect()
}

/// Counterclockwise convex hull (Andrew's monotone chain), collinear points
/// dropped.
pub fn convex_hull(points: &[Point2]) -> Vec<Point2> {
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let turn = |o: Point2, a: Point2, b: Point2| (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    let mut lower: Vec<Point2> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2 && turn(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point2> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && turn(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Closed membership in a counterclockwise convex polygon, with `eps` slack
/// on the edge cross products. Polygons with fewer than three vertices are
/// treated as a point or segment.
pub fn point_in_convex_polygon(poly: &[Point2], q: Point2, eps: f64) -> bool {
    match poly.len() {
        0 => false,
        1 => (q.x - poly[0].x).hypot(q.y - poly[0].y) <= eps,
        2 => {
            let (a, b) = (poly[0], poly[1]);
            let ab = Point2::new(b.x - a.x, b.y - a.y);
            let aq = Point2::new(q.x - a.x, q.y - a.y);
            let len = ab.x.hypot(ab.y);
            let along = (ab.x * aq.x + ab.y * aq.y) / len;
            let off = (ab.x * aq.y - ab.y * aq.x).abs() / len;
            off <= eps && along >= -eps && along <= len + eps
        }
        n => {
            let cross = |o: Point2, a: Point2, b: Point2| (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
            let p0 = poly[0];
            // locate the fan wedge (p0, p_i, p_{i+1}) containing q by bisection
            if cross(p0, poly[1], q) < -eps || cross(p0, poly[n - 1], q) > eps {
                return false;
            }
            let (mut lo, mut hi) = (1, n - 1);
            while hi - lo > 1 {
                let mid = (lo + hi) / 2;
                if cross(p0, poly[mid], q) >= 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            cross(poly[lo], poly[hi], q) >= -eps
        }
    }
}

/// Polygon approximating the hull of the generators.
pub fn sampled_hull(gens: &[Circle2], samples: usize) -> Vec<Point2> {
    let pts: Vec<Point2> = gens.iter().flat_map(|g| sample_circle(g, samples)).collect();
    convex_hull(&pts)
}

/// Oracle verdict: every sampled target point lies in the sampled hull.
pub fn sampled_contains(target: &Circle2, gens: &[Circle2], samples: usize) -> bool {
    let poly = sampled_hull(gens, samples);
    sample_circle(target, samples)
        .into_iter()
        .all(|q| point_in_convex_polygon(&poly, q, 1e-12))
}

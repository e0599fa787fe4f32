//! Containment of a circle in the convex hull of circles and points.
//!
//! The hull of finitely many disks has support function
//! `h(θ) = max_i (c_i · u(θ) + r_i)`, so a target circle is contained exactly
//! when `h(θ) ≥ c_t · u(θ) + r_t` for every direction. Each generator alone
//! satisfies that inequality on one closed arc of directions, and the
//! union of those arcs is the containment certificate.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Circle2, Point2, Tolerance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HullError {
    #[error("generator set is empty")]
    Empty,
    #[error("generator {0} is not a finite circle with nonnegative radius")]
    InvalidGenerator(usize),
    #[error("hull has empty interior ({0})")]
    DegenerateHull(String),
}

/// Nonempty finite set of circles (radius 0 allowed).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSet(Vec<Circle2>);

impl GeneratorSet {
    pub fn new(gens: Vec<Circle2>) -> Result<Self, HullError> {
        if gens.is_empty() {
            return Err(HullError::Empty);
        }
        if let Some(i) = gens.iter().position(|g| !g.is_valid()) {
            return Err(HullError::InvalidGenerator(i));
        }
        Ok(Self(gens))
    }

    pub fn from_points(points: &[Point2]) -> Result<Self, HullError> {
        Self::new(points.iter().copied().map(Circle2::point).collect())
    }

    pub fn as_slice(&self) -> &[Circle2] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Circle2> {
        self.0.iter()
    }

    /// A copy with one more generator.
    pub fn with(&self, extra: Circle2) -> Self {
        let mut v = self.0.clone();
        v.push(extra);
        Self(v)
    }

    /// A copy without generator `i`; `None` if that would empty the set.
    pub fn without(&self, i: usize) -> Option<Self> {
        if self.0.len() <= 1 || i >= self.0.len() {
            return None;
        }
        let mut v = self.0.clone();
        v.remove(i);
        Some(Self(v))
    }
}

impl<'a> IntoIterator for &'a GeneratorSet {
    type Item = &'a Circle2;
    type IntoIter = std::slice::Iter<'a, Circle2>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Closed arc of directions `{θ mod 2π : lo ≤ θ ≤ hi}` with `hi - lo < 2π`,
/// or one of the two degenerate sets.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ArcInterval {
    Empty,
    Full,
    Arc { lo: f64, hi: f64 },
}

impl ArcInterval {
    pub fn contains(&self, theta: f64) -> bool {
        match *self {
            ArcInterval::Empty => false,
            ArcInterval::Full => true,
            ArcInterval::Arc { lo, hi } => (theta - lo).rem_euclid(TAU) <= hi - lo,
        }
    }

    /// Pieces inside `[0, 2π)`, at most two.
    fn normalized(&self) -> Vec<(f64, f64)> {
        match *self {
            ArcInterval::Empty => vec![],
            ArcInterval::Full => vec![(0.0, TAU)],
            ArcInterval::Arc { lo, hi } => {
                let len = hi - lo;
                let start = lo.rem_euclid(TAU);
                if start + len <= TAU {
                    vec![(start, start + len)]
                } else {
                    vec![(start, TAU), (0.0, start + len - TAU)]
                }
            }
        }
    }
}

/// Outcome of a containment query.
///
/// `slack` is the minimum over directions of `h_gens(θ) - h_target(θ)`,
/// attained at `critical_direction`; `gaps` are the uncovered direction intervals of the arc cover (possibly
/// tangency slivers that were judged covered).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContainmentResult {
    pub contained: bool,
    pub slack: f64,
    pub critical_direction: f64,
    pub witness_direction: Option<f64>,
    pub gaps: Vec<(f64, f64)>,
}

/// `max_i (c_i · u(θ) + r_i)`.
pub fn support(gens: &GeneratorSet, theta: f64) -> f64 {
    let u = Point2::unit(theta);
    gens.iter()
        .map(|g| g.center.dot(u) + g.radius)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Generators whose support at `theta` is within `eps` of the maximum.
pub fn active_generators(gens: &GeneratorSet, theta: f64, eps: f64) -> Vec<usize> {
    let u = Point2::unit(theta);
    let vals: Vec<f64> = gens.iter().map(|g| g.center.dot(u) + g.radius).collect();
    let m = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (0..vals.len()).filter(|&i| m - vals[i] <= eps).collect()
}

/// Directions where generator `g` alone dominates the target's support.
pub fn coverage_arc(g: &Circle2, target: &Circle2) -> ArcInterval {
    let a = g.center - target.center;
    let d = a.norm();
    let delta = target.radius - g.radius;
    if d == 0.0 {
        return if delta <= 0.0 {
            ArcInterval::Full
        } else {
            ArcInterval::Empty
        };
    }
    if delta <= -d {
        return ArcInterval::Full;
    }
    if delta > d {
        return ArcInterval::Empty;
    }
    let phi = a.angle();
    let alpha = (delta / d).acos();
    ArcInterval::Arc {
        lo: phi - alpha,
        hi: phi + alpha,
    }
}

/// One generator's slack sinusoid `θ ↦ a·u(θ) + b` relative to the target.
#[derive(Clone, Copy, Debug)]
struct Sinusoid {
    a: Point2,
    b: f64,
}

impl Sinusoid {
    fn new(g: &Circle2, target: &Circle2) -> Self {
        Self {
            a: g.center - target.center,
            b: g.radius - target.radius,
        }
    }

    #[inline]
    fn eval(&self, u: Point2) -> f64 {
        self.a.dot(u) + self.b
    }
}

fn envelope(parts: &[Sinusoid], theta: f64) -> f64 {
    let u = Point2::unit(theta);
    parts
        .iter()
        .map(|s| s.eval(u))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Angles where `s_i(θ) = s_j(θ)`, i.e. `(a_i - a_j)·u = b_j - b_i`.
fn switch_angles(si: &Sinusoid, sj: &Sinusoid, out: &mut Vec<f64>) {
    let n = si.a - sj.a;
    let m = n.norm();
    if m == 0.0 {
        return;
    }
    let c = (sj.b - si.b) / m;
    if c.abs() > 1.0 {
        return;
    }
    let psi = n.angle();
    let alpha = c.acos();
    out.push(psi - alpha);
    out.push(psi + alpha);
}

/// Every angle at which the slack envelope can attain a local minimum, plus
/// the arc endpoints of the cover.
fn critical_angles(parts: &[Sinusoid], arcs: &[ArcInterval]) -> Vec<f64> {
    let mut out = Vec::with_capacity(parts.len() * (parts.len() + 3));
    for arc in arcs {
        if let ArcInterval::Arc { lo, hi } = *arc {
            out.push(lo);
            out.push(hi);
        }
    }
    for (i, si) in parts.iter().enumerate() {
        if si.a.norm() > 0.0 {
            out.push(si.a.angle() + PI);
        }
        for sj in &parts[i + 1..] {
            switch_angles(si, sj, &mut out);
        }
    }
    if out.is_empty() {
        out.push(0.0);
    }
    for t in out.iter_mut() {
        *t = t.rem_euclid(TAU);
    }
    out
}

/// Complement in `[0, 2π)` of the union of closed arcs, as open intervals
/// `(lo, hi)` with `hi` possibly beyond `2π` for the wrap-around gap.
fn uncovered_gaps(arcs: &[ArcInterval]) -> Vec<(f64, f64)> {
    let mut pieces: Vec<(f64, f64)> = arcs.iter().flat_map(|a| a.normalized()).collect();
    if pieces.is_empty() {
        return vec![(0.0, TAU)];
    }
    pieces.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(pieces.len());
    for (lo, hi) in pieces {
        match merged.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => merged.push((lo, hi)),
        }
    }
    let mut gaps = Vec::new();
    for w in merged.windows(2) {
        if w[1].0 > w[0].1 {
            gaps.push((w[0].1, w[1].0));
        }
    }
    let first = merged[0];
    let last = merged[merged.len() - 1];
    let wrap_len = first.0 + TAU - last.1;
    if wrap_len > 0.0 {
        gaps.push((last.1, first.0 + TAU));
    }
    gaps
}

/// Decides whether the closed disk `target` lies in the convex hull of the
/// closed disks in `gens`. Tangency counts as contained.
pub fn circle_in_hull(target: &Circle2, gens: &GeneratorSet, tol: &Tolerance) -> ContainmentResult {
    let parts: Vec<Sinusoid> = gens.iter().map(|g| Sinusoid::new(g, target)).collect();
    let arcs: Vec<ArcInterval> = gens.iter().map(|g| coverage_arc(g, target)).collect();
    let crit = critical_angles(&parts, &arcs);

    let mut slack = f64::INFINITY;
    let mut argmin = 0.0;
    for &t in &crit {
        let v = envelope(&parts, t);
        if v < slack {
            slack = v;
            argmin = t;
        }
    }

    // A gap of the arc cover is a genuine refutation only if the envelope
    // dips below the decision band somewhere inside it.
    let gaps = uncovered_gaps(&arcs);
    let mut covered = true;
    for &(lo, hi) in &gaps {
        let mid = 0.5 * (lo + hi);
        let mut gap_min = envelope(&parts, mid);
        for &t in &crit {
            let t = if t < lo { t + TAU } else { t };
            if t > lo && t < hi {
                gap_min = gap_min.min(envelope(&parts, t));
            }
        }
        if gap_min < -tol.eps_decision {
            covered = false;
        }
    }

    ContainmentResult {
        contained: covered,
        slack,
        critical_direction: argmin,
        witness_direction: (!covered).then_some(argmin),
        gaps,
    }
}

/// Minimum support slack; strictly positive iff the target is loosely
/// included (every point interior to the hull).
pub fn min_slack(target: &Circle2, gens: &GeneratorSet, tol: &Tolerance) -> f64 {
    circle_in_hull(target, gens, tol).slack
}

/// One piece of a hull boundary, traversed counterclockwise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum BoundaryPiece {
    /// Arc of generator `generator` between outward normal angles `start`
    /// and `end` (`end > start`).
    Arc {
        generator: usize,
        circle: Circle2,
        start: f64,
        end: f64,
    },
    /// Common tangent segment from generator `from` to generator `to`,
    /// with outward normal angle `normal`.
    Segment {
        from: usize,
        to: usize,
        start: Point2,
        end: Point2,
        normal: f64,
    },
}

impl BoundaryPiece {
    pub fn start_point(&self) -> Point2 {
        match *self {
            BoundaryPiece::Arc { circle, start, .. } => circle.at(start),
            BoundaryPiece::Segment { start, .. } => start,
        }
    }

    pub fn end_point(&self) -> Point2 {
        match *self {
            BoundaryPiece::Arc { circle, end, .. } => circle.at(end),
            BoundaryPiece::Segment { end, .. } => end,
        }
    }

    /// Outward normal angles at the start and end of the piece.
    fn normal_range(&self) -> (f64, f64) {
        match *self {
            BoundaryPiece::Arc { start, end, .. } => (start, end),
            BoundaryPiece::Segment { normal, .. } => (normal, normal),
        }
    }

    /// Contribution to `∮ x dy - y dx`.
    fn green(&self) -> f64 {
        match *self {
            BoundaryPiece::Segment { start, end, .. } => start.cross(end),
            BoundaryPiece::Arc {
                circle, start, end, ..
            } => {
                let r = circle.radius;
                let c = circle.center;
                r * c.x * (end.sin() - start.sin()) - r * c.y * (end.cos() - start.cos())
                    + r * r * (end - start)
            }
        }
    }
}

/// Counterclockwise boundary of the hull of a generator set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HullBoundary {
    pub pieces: Vec<BoundaryPiece>,
    /// Generators that never touch the boundary.
    pub omitted: Vec<usize>,
}

impl HullBoundary {
    /// Largest gap between the end of a piece and the start of the next.
    pub fn closure_error(&self) -> f64 {
        let n = self.pieces.len();
        (0..n)
            .map(|i| self.pieces[i].end_point().dist(self.pieces[(i + 1) % n].start_point()))
            .fold(0.0, f64::max)
    }

    /// Total turning of the outward normal around the chain.
    pub fn total_turning(&self) -> f64 {
        let n = self.pieces.len();
        let mut total = 0.0;
        for i in 0..n {
            let (s, e) = self.pieces[i].normal_range();
            total += e - s;
            let next = self.pieces[(i + 1) % n].normal_range().0;
            total += (next - e).rem_euclid(TAU);
        }
        // a single full arc closes on itself with a zero corner
        if n == 1 && total == 0.0 {
            return TAU;
        }
        total
    }

    pub fn area(&self) -> f64 {
        0.5 * self.pieces.iter().map(BoundaryPiece::green).sum::<f64>()
    }

    /// Support function of the chain itself.
    pub fn support(&self, theta: f64) -> f64 {
        let u = Point2::unit(theta);
        let mut best = f64::NEG_INFINITY;
        for p in &self.pieces {
            best = best.max(p.start_point().dot(u)).max(p.end_point().dot(u));
            if let BoundaryPiece::Arc {
                circle, start, end, ..
            } = *p
            {
                let t = start + (theta - start).rem_euclid(TAU);
                if t <= end {
                    best = best.max(circle.center.dot(u) + circle.radius);
                }
            }
        }
        best
    }
}

/// Generator index maximizing `c·u + r` at `theta` (lowest index on ties).
fn active_generator(gens: &[Circle2], theta: f64) -> usize {
    let u = Point2::unit(theta);
    let mut best = 0;
    let mut best_v = f64::NEG_INFINITY;
    for (i, g) in gens.iter().enumerate() {
        let v = g.center.dot(u) + g.radius;
        if v > best_v {
            best_v = v;
            best = i;
        }
    }
    best
}

fn check_nondegenerate(gens: &[Circle2], tol: &Tolerance) -> Result<(), HullError> {
    if gens.iter().any(|g| g.radius > tol.eps_geom) {
        return Ok(());
    }
    let base = gens[0].center;
    let far = gens
        .iter()
        .map(|g| g.center)
        .max_by(|a, b| a.dist(base).total_cmp(&b.dist(base)))
        .unwrap_or(base);
    let len = far.dist(base);
    if len <= tol.eps_geom {
        return Err(HullError::DegenerateHull(format!(
            "single point ({}, {})",
            base.x, base.y
        )));
    }
    let dir = (far - base) * (1.0 / len);
    let width = gens
        .iter()
        .map(|g| dir.cross(g.center - base).abs())
        .fold(0.0, f64::max);
    if width <= tol.eps_geom {
        return Err(HullError::DegenerateHull(format!(
            "segment from ({}, {}) to ({}, {})",
            base.x, base.y, far.x, far.y
        )));
    }
    Ok(())
}

/// Boundary of the hull as a counterclockwise chain of arcs and tangent
/// segments.
///
/// The direction circle is split at every pairwise switch angle of the
/// support sinusoids; on each sub-interval one generator is active. Runs of
/// the same generator become one arc (skipped for points), and a change of
/// generator becomes the common tangent segment at that normal angle.
pub fn hull_boundary(gens: &GeneratorSet, tol: &Tolerance) -> Result<HullBoundary, HullError> {
    let g = gens.as_slice();
    check_nondegenerate(g, tol)?;

    let mut cuts: Vec<f64> = Vec::new();
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            // support_i = support_j  <=>  (c_i - c_j)·u = r_j - r_i
            let si = Sinusoid {
                a: g[i].center,
                b: g[i].radius,
            };
            let sj = Sinusoid {
                a: g[j].center,
                b: g[j].radius,
            };
            switch_angles(&si, &sj, &mut cuts);
        }
    }
    let mut cuts: Vec<f64> = cuts.into_iter().map(|t| t.rem_euclid(TAU)).collect();
    cuts.push(0.0);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-14);

    // (generator, start, end) runs over the unrolled circle [cuts[0], cuts[0] + 2π)
    let mut runs: Vec<(usize, f64, f64)> = Vec::new();
    for k in 0..cuts.len() {
        let lo = cuts[k];
        let hi = if k + 1 < cuts.len() {
            cuts[k + 1]
        } else {
            cuts[0] + TAU
        };
        if hi - lo <= 1e-14 {
            continue;
        }
        let gi = active_generator(g, 0.5 * (lo + hi));
        match runs.last_mut() {
            Some(last) if last.0 == gi => last.2 = hi,
            _ => runs.push((gi, lo, hi)),
        }
    }
    if runs.len() > 1 && runs[0].0 == runs[runs.len() - 1].0 {
        let (_, lo, _) = runs.pop().expect("len > 1");
        runs[0].1 = lo - TAU;
    }

    let mut pieces = Vec::new();
    let n = runs.len();
    for (k, &(gi, lo, hi)) in runs.iter().enumerate() {
        if g[gi].radius > 0.0 {
            pieces.push(BoundaryPiece::Arc {
                generator: gi,
                circle: g[gi],
                start: lo,
                end: hi,
            });
        }
        if n > 1 {
            let (gj, _, _) = runs[(k + 1) % n];
            pieces.push(BoundaryPiece::Segment {
                from: gi,
                to: gj,
                start: g[gi].at(hi),
                end: g[gj].at(hi),
                normal: hi,
            });
        }
    }
    let mut active: Vec<usize> = runs.iter().map(|r| r.0).collect();
    active.sort_unstable();
    active.dedup();
    let omitted = (0..g.len()).filter(|i| active.binary_search(i).is_err()).collect();
    Ok(HullBoundary { pieces, omitted })
}

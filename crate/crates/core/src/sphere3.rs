//! Sphere configurations in a regular tetrahedron for which the planar
//! carousel statement has no 3D analogue.
//!
//! Containment of a ball in the hull of balls is decided by minimizing the
//! support slack `max_i (c_i·u + r_i) - (c_t·u + r_t)` over unit directions.
//! A direction with negative slack is an exact refutation; a nonnegative
//! minimum is only as good as the search that found it.

use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Circle2, Point2, Tolerance};
use crate::hull::{circle_in_hull, ContainmentResult, GeneratorSet};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Sphere3Error {
    #[error("projection basis is not orthonormal")]
    DegenerateBasis,
    #[error("radius {r} does not fit: smallest face distance is {min_face_distance}")]
    PreconditionRadius { r: f64, min_face_distance: f64 },
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(self, o: Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    #[inline]
    pub fn dist(self, o: Self) -> f64 {
        (self - o).norm()
    }

    pub fn normalized(self) -> Self {
        self * (1.0 / self.norm())
    }

    pub fn midpoint(self, o: Self) -> Self {
        (self + o) * 0.5
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Some unit vector orthogonal to `self` (assumed unit).
    fn any_orthogonal(self) -> Self {
        let helper = if self.x.abs() < 0.6 {
            Point3::new(1.0, 0.0, 0.0)
        } else {
            Point3::new(0.0, 1.0, 0.0)
        };
        self.cross(helper).normalized()
    }

    fn lex_cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.x
            .total_cmp(&o.x)
            .then(self.y.total_cmp(&o.y))
            .then(self.z.total_cmp(&o.z))
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Point3 {
    type Output = Point3;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sphere3 {
    pub center: Point3,
    pub radius: f64,
}

impl Sphere3 {
    pub const fn new(center: Point3, radius: f64) -> Self {
        Self { center, radius }
    }

    pub const fn point(p: Point3) -> Self {
        Self {
            center: p,
            radius: 0.0,
        }
    }
}

/// Affine plane with an orthonormal in-plane basis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Plane {
    pub origin: Point3,
    pub e1: Point3,
    pub e2: Point3,
}

impl Plane {
    /// Plane through three points, `e1` along `b - a` and `e2` completing
    /// it towards `c`.
    pub fn through(a: Point3, b: Point3, c: Point3) -> Result<Self, Sphere3Error> {
        let e1 = b - a;
        if e1.norm() == 0.0 {
            return Err(Sphere3Error::DegenerateBasis);
        }
        let e1 = e1.normalized();
        let w = c - a;
        let e2 = w - e1 * w.dot(e1);
        if e2.norm() <= 1e-12 * w.norm().max(1.0) {
            return Err(Sphere3Error::DegenerateBasis);
        }
        Ok(Self {
            origin: a,
            e1,
            e2: e2.normalized(),
        })
    }

    pub fn project(&self, p: Point3) -> Point2 {
        let v = p - self.origin;
        Point2::new(v.dot(self.e1), v.dot(self.e2))
    }

    pub fn lift(&self, q: Point2) -> Point3 {
        self.origin + self.e1 * q.x + self.e2 * q.y
    }

    fn check(&self) -> Result<(), Sphere3Error> {
        let ok = (self.e1.norm() - 1.0).abs() <= 1e-9
            && (self.e2.norm() - 1.0).abs() <= 1e-9
            && self.e1.dot(self.e2).abs() <= 1e-9
            && self.origin.is_finite();
        ok.then_some(()).ok_or(Sphere3Error::DegenerateBasis)
    }
}

/// Direction-search parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Icosphere subdivision level; level `n` has `10·4ⁿ + 2` directions.
    pub icosphere_level: u32,
    /// Number of best grid directions refined locally.
    pub seeds: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            icosphere_level: 4,
            seeds: 20,
        }
    }
}

/// Result of the 2D projection test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionOutcome {
    pub plane: Plane,
    /// The 2D disk escapes the projected hull, which refutes the 3D
    /// inclusion. `false` means inconclusive, not contained.
    pub refuted: bool,
    pub result: ContainmentResult,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Containment3Result {
    pub contained: bool,
    pub slack: f64,
    /// Direction attaining `slack`.
    pub direction: Point3,
    /// Present iff not contained; has strictly negative slack.
    pub witness_direction: Option<Point3>,
    /// The containment verdict came from a finite search, not a certificate.
    pub search_based: bool,
    pub projection_certificate: Option<ProjectionOutcome>,
}

/// Unit-sphere vertices of the subdivided icosahedron, deterministic order.
pub fn icosphere(level: u32) -> Vec<Point3> {
    let t = (1.0 + 5.0_f64.sqrt()) / 2.0;
    let mut verts: Vec<Point3> = [
        (-1.0, t, 0.0),
        (1.0, t, 0.0),
        (-1.0, -t, 0.0),
        (1.0, -t, 0.0),
        (0.0, -1.0, t),
        (0.0, 1.0, t),
        (0.0, -1.0, -t),
        (0.0, 1.0, -t),
        (t, 0.0, -1.0),
        (t, 0.0, 1.0),
        (-t, 0.0, -1.0),
        (-t, 0.0, 1.0),
    ]
    .iter()
    .map(|&(x, y, z)| Point3::new(x, y, z).normalized())
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..level {
        let mut cache: HashMap<(usize, usize), usize> = HashMap::new();
        let mut mid = |a: usize, b: usize, verts: &mut Vec<Point3>| {
            let key = (a.min(b), a.max(b));
            *cache.entry(key).or_insert_with(|| {
                verts.push(verts[a].midpoint(verts[b]).normalized());
                verts.len() - 1
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for [a, b, c] in faces {
            let ab = mid(a, b, &mut verts);
            let bc = mid(b, c, &mut verts);
            let ca = mid(c, a, &mut verts);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    verts
}

/// `max_i (c_i · u + r_i)`.
pub fn support3(gens: &[Sphere3], u: Point3) -> f64 {
    gens.iter()
        .map(|g| g.center.dot(u) + g.radius)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Slack terms `a_i·u + b_i` of every generator relative to the target.
struct SlackField {
    terms: Vec<(Point3, f64)>,
}

impl SlackField {
    fn new(target: &Sphere3, gens: &[Sphere3]) -> Self {
        Self {
            terms: gens
                .iter()
                .map(|g| (g.center - target.center, g.radius - target.radius))
                .collect(),
        }
    }

    fn eval(&self, u: Point3) -> f64 {
        self.terms
            .iter()
            .map(|(a, b)| a.dot(u) + b)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn active(&self, u: Point3, eps: f64) -> Vec<usize> {
        let vals: Vec<f64> = self.terms.iter().map(|(a, b)| a.dot(u) + b).collect();
        let m = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut idx: Vec<usize> = (0..vals.len()).filter(|&i| m - vals[i] <= eps).collect();
        idx.sort_by(|&i, &j| vals[j].total_cmp(&vals[i]));
        idx.truncate(6);
        idx
    }

    /// Compass search on the sphere: probe 12 tangent directions, move to
    /// the best improvement, halve the step when none improves.
    fn compass(&self, mut u: Point3, mut f: f64) -> (Point3, f64) {
        let mut h = 0.05;
        let mut iters = 0;
        while h > 1e-10 && iters < 5000 {
            iters += 1;
            let e1 = u.any_orthogonal();
            let e2 = u.cross(e1);
            let mut best = (u, f);
            for s in 0..12 {
                let ang = std::f64::consts::TAU * s as f64 / 12.0;
                let cand = (u + (e1 * ang.cos() + e2 * ang.sin()) * h).normalized();
                let v = self.eval(cand);
                if v < best.1 {
                    best = (cand, v);
                }
            }
            if best.1 < f {
                (u, f) = best;
            } else {
                h *= 0.5;
            }
        }
        (u, f)
    }

    /// Exact critical points of the envelope restricted to the generators
    /// active near `u`: single minima, minima along two-way ridges, and
    /// three-way corners.
    fn polish(&self, u: Point3, f: f64) -> (Point3, f64) {
        let scale = self
            .terms
            .iter()
            .map(|(a, b)| a.norm() + b.abs())
            .fold(1.0, f64::max);
        let act = self.active(u, 1e-6 * scale);
        let mut cands: Vec<Point3> = Vec::new();
        for &i in &act {
            let (a, _) = self.terms[i];
            if a.norm() > 0.0 {
                cands.push(-a.normalized());
            }
        }
        for (x, &i) in act.iter().enumerate() {
            for &j in &act[x + 1..] {
                if let Some(c) = ridge_minimum(self.terms[i], self.terms[j]) {
                    cands.push(c);
                }
                for &k in act.iter().skip(x + 1).filter(|&&k| k > j) {
                    cands.extend(corner_points(self.terms[i], self.terms[j], self.terms[k], u));
                }
            }
        }
        let mut best = (u, f);
        for c in cands {
            if !c.is_finite() {
                continue;
            }
            let v = self.eval(c);
            if v < best.1 {
                best = (c, v);
            }
        }
        best
    }
}

/// Minimum of `a_i·u` on `{|u| = 1, (a_i - a_j)·u = b_j - b_i}`.
fn ridge_minimum((ai, bi): (Point3, f64), (aj, bj): (Point3, f64)) -> Option<Point3> {
    let n = ai - aj;
    let nn = n.norm();
    if nn == 0.0 {
        return None;
    }
    let c = (bj - bi) / nn;
    if c.abs() > 1.0 {
        return None;
    }
    let nu = n * (1.0 / nn);
    let center = nu * c;
    let rho = (1.0 - c * c).sqrt();
    let perp = ai - nu * ai.dot(nu);
    let w = if perp.norm() > 1e-15 {
        -perp.normalized()
    } else {
        nu.any_orthogonal()
    };
    Some(center + w * rho)
}

/// Unit vectors where three slack terms are equal, nearest to `near` first.
fn corner_points(
    (ai, bi): (Point3, f64),
    (aj, bj): (Point3, f64),
    (ak, bk): (Point3, f64),
    near: Point3,
) -> Vec<Point3> {
    let n1 = ai - aj;
    let n2 = ai - ak;
    let (c1, c2) = (bj - bi, bk - bi);
    let m = n1.cross(n2);
    let mm = m.dot(m);
    if mm <= 1e-24 {
        return vec![];
    }
    // particular solution in span(n1, n2)
    let p0 = (n2.cross(m) * c1 + m.cross(n1) * c2) * (1.0 / mm);
    let md = m * (1.0 / mm.sqrt());
    let b = p0.dot(md);
    let disc = b * b - (p0.dot(p0) - 1.0);
    if disc < 0.0 {
        return vec![];
    }
    let s = disc.sqrt();
    let mut out = vec![p0 + md * (-b + s), p0 + md * (-b - s)];
    out.sort_by(|x, y| x.dist(near).total_cmp(&y.dist(near)));
    out
}

/// Decides `target ⊆ conv(gens)` by minimizing the support slack over the
/// direction sphere: icosphere grid, then local refinement from the best
/// `cfg.seeds` grid directions.
pub fn sphere_in_hull3(
    target: &Sphere3,
    gens: &[Sphere3],
    cfg: &SearchConfig,
    tol: &Tolerance,
) -> Result<Containment3Result, Sphere3Error> {
    if gens.is_empty() {
        return Err(Sphere3Error::InvalidInput("no generators".into()));
    }
    let field = SlackField::new(target, gens);
    let mut grid: Vec<(f64, Point3)> = icosphere(cfg.icosphere_level)
        .into_iter()
        .map(|u| (field.eval(u), u))
        .collect();
    grid.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.lex_cmp(&b.1)));

    let mut best = grid[0];
    for &(f, u) in grid.iter().take(cfg.seeds.max(1)) {
        let (u1, f1) = field.compass(u, f);
        let (u2, f2) = field.polish(u1, f1);
        if f2 < best.0 || (f2 == best.0 && u2.lex_cmp(&best.1).is_lt()) {
            best = (f2, u2);
        }
    }
    let (slack, direction) = best;
    let contained = slack >= -tol.eps_decision;
    Ok(Containment3Result {
        contained,
        slack,
        direction,
        witness_direction: (!contained).then_some(direction),
        search_based: contained,
        projection_certificate: None,
    })
}

/// Projects spheres to circles of the same radius in `plane` and runs the
/// exact planar test. A planar refutation refutes the 3D inclusion because
/// orthogonal projection commutes with convex hulls.
pub fn projection_reduction(
    target: &Sphere3,
    gens: &[Sphere3],
    plane: &Plane,
    tol: &Tolerance,
) -> Result<ProjectionOutcome, Sphere3Error> {
    plane.check()?;
    let proj = |s: &Sphere3| Circle2::new(plane.project(s.center), s.radius);
    let g = GeneratorSet::new(gens.iter().map(proj).collect())
        .map_err(|e| Sphere3Error::InvalidInput(e.to_string()))?;
    let result = circle_in_hull(&proj(target), &g, tol);
    Ok(ProjectionOutcome {
        plane: *plane,
        refuted: !result.contained,
        result,
    })
}

/// Alternating vertices `(0,0,0), (s,s,0), (s,0,s), (0,s,s)` of the cube
/// `[0, s]³`: a regular tetrahedron with edge `s·√2`.
pub fn tetrahedron_from_cube(side: f64) -> Result<[Point3; 4], Sphere3Error> {
    if !(side > 0.0 && side.is_finite()) {
        return Err(Sphere3Error::InvalidInput(format!("side must be positive, got {side}")));
    }
    let s = side;
    Ok([
        Point3::new(0.0, 0.0, 0.0),
        Point3::new(s, s, 0.0),
        Point3::new(s, 0.0, s),
        Point3::new(0.0, s, s),
    ])
}

/// Midpoints `B`, `C` of the opposite edges `[A0, A1]`, `[A2, A3]`, and the
/// trisection points of `[B, C]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisPoints {
    pub b: Point3,
    pub c: Point3,
    pub p_minus1: Point3,
    pub p0: Point3,
}

pub fn axis_points(v: &[Point3; 4]) -> AxisPoints {
    let b = v[0].midpoint(v[1]);
    let c = v[2].midpoint(v[3]);
    AxisPoints {
        b,
        c,
        p_minus1: b + (c - b) * (1.0 / 3.0),
        p0: b + (c - b) * (2.0 / 3.0),
    }
}

/// Distance from `p` to the plane of the face opposite each vertex,
/// positive on the inner side.
pub fn face_distances(v: &[Point3; 4], p: Point3) -> [f64; 4] {
    std::array::from_fn(|i| {
        let f: Vec<Point3> = (0..4).filter(|&k| k != i).map(|k| v[k]).collect();
        let mut n = (f[1] - f[0]).cross(f[2] - f[0]).normalized();
        if n.dot(v[i] - f[0]) < 0.0 {
            n = -n;
        }
        n.dot(p - f[0])
    })
}

fn min_face_distance(v: &[Point3; 4], p: Point3) -> f64 {
    face_distances(v, p).into_iter().fold(f64::INFINITY, f64::min)
}

/// Plane through `A2`, `A3` and `B`, with `e1` along `A2 - A3` and `e2`
/// along the axis `B → C`.
pub fn axis_plane(v: &[Point3; 4]) -> Result<Plane, Sphere3Error> {
    let ax = axis_points(v);
    let e1 = (v[2] - v[3]).normalized();
    let e2 = ax.c - ax.b;
    let e2 = (e2 - e1 * e2.dot(e1)).normalized();
    let plane = Plane {
        origin: ax.b,
        e1,
        e2,
    };
    plane.check()?;
    Ok(plane)
}

/// One refuted inclusion `S_k ⊄ conv(other spheres ∪ vertices \ {A_j})`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairCheck {
    pub j: usize,
    /// Sphere label: `-1, 0, 1, …`.
    pub k: i64,
    pub target: i64,
    pub result: Containment3Result,
}

impl PairCheck {
    pub fn refuted(&self) -> bool {
        !self.result.contained
            && self
                .result
                .witness_direction
                .is_some_and(|_| self.result.slack < 0.0)
    }
}

/// `(label, sphere)` pairs.
pub type LabeledSpheres = Vec<(i64, Sphere3)>;

fn check_pair(
    vertices: &[Point3; 4],
    spheres: &LabeledSpheres,
    j: usize,
    target_label: i64,
    generator_labels: &[i64],
    plane: Option<&Plane>,
    cfg: &SearchConfig,
    tol: &Tolerance,
) -> Result<Containment3Result, Sphere3Error> {
    let find = |l: i64| spheres.iter().find(|(x, _)| *x == l).map(|(_, s)| *s).expect("label");
    let target = find(target_label);
    let mut gens: Vec<Sphere3> = generator_labels.iter().map(|&l| find(l)).collect();
    gens.extend((0..4).filter(|&i| i != j).map(|i| Sphere3::point(vertices[i])));
    let mut r = sphere_in_hull3(&target, &gens, cfg, tol)?;
    if let Some(plane) = plane {
        let proj = projection_reduction(&target, &gens, plane, tol)?;
        if proj.refuted {
            r.contained = false;
            r.search_based = false;
            if r.witness_direction.is_none() {
                // the planar witness lifts to an in-plane 3D direction
                let d = proj.result.witness_direction.expect("refuted");
                let u = plane.e1 * d.cos() + plane.e2 * d.sin();
                r.witness_direction = Some(u);
                r.direction = u;
                r.slack = SlackField::new(&target, &gens).eval(u);
            }
        }
        r.projection_certificate = Some(proj);
    }
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Example41Report {
    pub side: f64,
    pub r: f64,
    pub vertices: [Point3; 4],
    pub axis: AxisPoints,
    /// Smallest face distance of either center minus `r`.
    pub face_clearance: f64,
    pub pairs: Vec<PairCheck>,
    pub all_refuted: bool,
}

/// Two equal spheres on the trisection points of the `B–C` axis: for every
/// `j ∈ 0..4` and `k ∈ {-1, 0}`, `S_{-1-k}` escapes the hull of `S_k` and the
/// three vertices other than `A_j`. The `j = 3` cases also carry the planar
/// certificate in the plane through `A2`, `A3`, `B`.
pub fn example_4_1(
    side: f64,
    r: f64,
    cfg: &SearchConfig,
    tol: &Tolerance,
) -> Result<Example41Report, Sphere3Error> {
    let vertices = tetrahedron_from_cube(side)?;
    let axis = axis_points(&vertices);
    if !(r > 0.0) {
        return Err(Sphere3Error::InvalidInput(format!("radius must be positive, got {r}")));
    }
    let min_face = min_face_distance(&vertices, axis.p_minus1).min(min_face_distance(&vertices, axis.p0));
    if min_face < r + tol.eps_decision {
        return Err(Sphere3Error::PreconditionRadius {
            r,
            min_face_distance: min_face,
        });
    }
    let spheres: LabeledSpheres = vec![
        (-1, Sphere3::new(axis.p_minus1, r)),
        (0, Sphere3::new(axis.p0, r)),
    ];
    let plane = axis_plane(&vertices)?;
    let mut pairs = Vec::new();
    for j in 0..4 {
        for k in [-1_i64, 0] {
            let target = -1 - k;
            let result = check_pair(
                &vertices,
                &spheres,
                j,
                target,
                &[k],
                (j == 3).then_some(&plane),
                cfg,
                tol,
            )?;
            pairs.push(PairCheck { j, k, target, result });
        }
    }
    let all_refuted = pairs.iter().all(PairCheck::refuted);
    Ok(Example41Report {
        side,
        r,
        vertices,
        axis,
        face_clearance: min_face - r,
        pairs,
        all_refuted,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Example42Params {
    pub t: usize,
    /// Distance from the axis midpoint to the guide-arc center, in units of
    /// `|BC|`.
    pub arc_radius_factor: f64,
    pub side: f64,
}

impl Default for Example42Params {
    fn default() -> Self {
        Self {
            t: 4,
            arc_radius_factor: 10.0,
            side: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Example42Report {
    pub params: Example42Params,
    pub vertices: [Point3; 4],
    pub axis: AxisPoints,
    pub guide_center: Point3,
    pub guide_radius: f64,
    /// Spheres ordered `S_{-1}, S_0, S_1, …, S_{t-2}`.
    pub spheres: LabeledSpheres,
    /// `max_i | |O P_i| + r_i - R |`.
    pub tangency_residual: f64,
    /// Smallest face distance minus radius over all spheres.
    pub min_face_clearance: f64,
    pub pairwise_non_nested: bool,
    pub pairs: Vec<PairCheck>,
    pub all_refuted: bool,
}

/// `t` spheres centered on the axis between the trisection points, each
/// cross-section circle internally tangent to a large guide circle in the
/// plane through `A2`, `A3`, `B`.
///
/// The guide center sits on the perpendicular bisector of `[B, C]` at
/// distance `factor·|BC|` towards `A2`; the guide radius starts at that
/// distance plus `side/10` and is reduced (which shrinks every radius by the
/// same amount and keeps the tangency) until all spheres clear every face
/// by `eps_decision`.
pub fn example_4_2(
    params: &Example42Params,
    cfg: &SearchConfig,
    tol: &Tolerance,
) -> Result<Example42Report, Sphere3Error> {
    let t = params.t;
    if t < 3 {
        return Err(Sphere3Error::InvalidInput(format!("t must be at least 3, got {t}")));
    }
    if !(params.arc_radius_factor > 0.0 && params.arc_radius_factor.is_finite()) {
        return Err(Sphere3Error::InvalidInput("arc radius factor must be positive".into()));
    }
    let vertices = tetrahedron_from_cube(params.side)?;
    let axis = axis_points(&vertices);
    let mut centers: Vec<(i64, Point3)> = vec![(-1, axis.p_minus1), (0, axis.p0)];
    for i in 1..=(t - 2) {
        let f = i as f64 / (t - 1) as f64;
        centers.push((i as i64, axis.p0 + (axis.p_minus1 - axis.p0) * f));
    }

    let bc = axis.b.dist(axis.c);
    let mid = axis.b.midpoint(axis.c);
    let plane = axis_plane(&vertices)?;
    let guide_center = mid + plane.e1 * (params.arc_radius_factor * bc);
    let margin = tol.eps_decision;
    let r_start = params.arc_radius_factor * bc + params.side / 10.0;
    let r_fit = centers
        .iter()
        .map(|&(_, p)| guide_center.dist(p) + min_face_distance(&vertices, p) - margin)
        .fold(f64::INFINITY, f64::min);
    let guide_radius = r_start.min(r_fit);

    let spheres: LabeledSpheres = centers
        .iter()
        .map(|&(l, p)| (l, Sphere3::new(p, guide_radius - guide_center.dist(p))))
        .collect();
    if let Some((l, s)) = spheres.iter().find(|(_, s)| s.radius <= 0.0) {
        return Err(Sphere3Error::ConstructionFailed(format!(
            "sphere {l} would need radius {}",
            s.radius
        )));
    }
    let tangency_residual = spheres
        .iter()
        .map(|(_, s)| (guide_center.dist(s.center) + s.radius - guide_radius).abs())
        .fold(0.0, f64::max);
    let min_face_clearance = spheres
        .iter()
        .map(|(_, s)| min_face_distance(&vertices, s.center) - s.radius)
        .fold(f64::INFINITY, f64::min);
    let mut pairwise_non_nested = true;
    for (x, (_, a)) in spheres.iter().enumerate() {
        for (_, b) in &spheres[x + 1..] {
            if a.center.dist(b.center) <= (a.radius - b.radius).abs() {
                pairwise_non_nested = false;
            }
        }
    }

    let labels: Vec<i64> = spheres.iter().map(|(l, _)| *l).collect();
    let mut pairs = Vec::new();
    for j in 0..4 {
        for &k in &labels {
            let others: Vec<i64> = labels.iter().copied().filter(|&l| l != k).collect();
            let result = check_pair(
                &vertices,
                &spheres,
                j,
                k,
                &others,
                (j == 3).then_some(&plane),
                cfg,
                tol,
            )?;
            pairs.push(PairCheck { j, k, target: k, result });
        }
    }
    let all_refuted = pairs.iter().all(PairCheck::refuted);
    Ok(Example42Report {
        params: *params,
        vertices,
        axis,
        guide_center,
        guide_radius,
        spheres,
        tangency_residual,
        min_face_clearance,
        pairwise_non_nested,
        pairs,
        all_refuted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn icosphere_counts() {
        assert_eq!(icosphere(0).len(), 12);
        assert_eq!(icosphere(4).len(), 2562);
        assert_eq!(icosphere(5).len(), 10242);
        assert!(icosphere(2).iter().all(|u| (u.norm() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn tetrahedron_examples() {
        for side in [1.0, 2.0] {
            let v = tetrahedron_from_cube(side).unwrap();
            for i in 0..4 {
                for k in i + 1..4 {
                    assert!((v[i].dist(v[k]) - side * 2.0_f64.sqrt()).abs() < 1e-12);
                }
            }
        }
        let v = tetrahedron_from_cube(1.0).unwrap();
        let c = (v[0] + v[1] + v[2] + v[3]) * 0.25;
        assert!(c.dist(Point3::new(0.5, 0.5, 0.5)) < 1e-15);
        assert!(tetrahedron_from_cube(0.0).is_err());
    }

    #[test]
    fn axis_examples() {
        let a = axis_points(&tetrahedron_from_cube(1.0).unwrap());
        assert!(a.b.dist(Point3::new(0.5, 0.5, 0.0)) < 1e-15);
        assert!(a.c.dist(Point3::new(0.5, 0.5, 1.0)) < 1e-15);
        assert!(a.p_minus1.dist(Point3::new(0.5, 0.5, 1.0 / 3.0)) < 1e-15);
        assert!(a.p0.dist(Point3::new(0.5, 0.5, 2.0 / 3.0)) < 1e-15);
        let d1 = a.b.dist(a.p_minus1);
        assert!((d1 - a.p_minus1.dist(a.p0)).abs() < 1e-15);
        assert!((d1 - a.p0.dist(a.c)).abs() < 1e-15);
        let a3 = axis_points(&tetrahedron_from_cube(3.0).unwrap());
        assert!(a3.p0.dist(a.p0 * 3.0) < 1e-14);
    }

    #[test]
    fn face_distance_values() {
        let v = tetrahedron_from_cube(1.0).unwrap();
        let a = axis_points(&v);
        let d = face_distances(&v, a.p_minus1);
        let near = 1.0 / (3.0 * 3.0_f64.sqrt());
        let mut sorted = d;
        sorted.sort_by(f64::total_cmp);
        assert!((sorted[0] - near).abs() < 1e-12);
        assert!((sorted[1] - near).abs() < 1e-12);
        assert!((sorted[2] - 2.0 * near).abs() < 1e-12);
        assert!((sorted[3] - 2.0 * near).abs() < 1e-12);
    }

    #[test]
    fn concentric_spheres() {
        let c = Point3::new(0.5, 0.5, 0.5);
        let cfg = SearchConfig::default();
        let r = sphere_in_hull3(&Sphere3::new(c, 0.1), &[Sphere3::new(c, 0.2)], &cfg, &tol()).unwrap();
        assert!(r.contained && r.search_based);
        assert!((r.slack - 0.1).abs() < 1e-12);
        let r = sphere_in_hull3(&Sphere3::new(c, 0.3), &[Sphere3::new(c, 0.2)], &cfg, &tol()).unwrap();
        assert!(!r.contained && !r.search_based);
        assert!((r.slack + 0.1).abs() < 1e-12);
        assert!(r.witness_direction.is_some());
    }

    #[test]
    fn projection_examples() {
        let t = tol();
        let xy = Plane {
            origin: Point3::new(0.0, 0.0, 0.0),
            e1: Point3::new(1.0, 0.0, 0.0),
            e2: Point3::new(0.0, 1.0, 0.0),
        };
        let target = Sphere3::new(Point3::new(0.0, 0.0, 5.0), 1.0);
        let gens = [Sphere3::new(Point3::new(0.0, 0.0, 0.0), 2.0)];
        let p = projection_reduction(&target, &gens, &xy, &t).unwrap();
        assert!(!p.refuted);
        let r3 = sphere_in_hull3(&target, &gens, &SearchConfig::default(), &t).unwrap();
        assert!(!r3.contained);

        let far = [Sphere3::new(Point3::new(10.0, 10.0, 0.0), 1.0)];
        let near = Sphere3::new(Point3::new(0.0, 0.0, 0.0), 1.0);
        assert!(projection_reduction(&near, &far, &xy, &t).unwrap().refuted);
        assert!(!sphere_in_hull3(&near, &far, &SearchConfig::default(), &t).unwrap().contained);

        let bad = Plane {
            e2: Point3::new(1.0, 1.0, 0.0),
            ..xy
        };
        assert_eq!(projection_reduction(&near, &far, &bad, &t), Err(Sphere3Error::DegenerateBasis));
    }

    #[test]
    fn plane_through_points() {
        let p = Plane::through(
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(2.0, 0.0, 0.0),
            Point3::new(1.0, 3.0, 0.0),
        )
        .unwrap();
        assert!(p.e1.dot(p.e2).abs() < 1e-15);
        let q = Point3::new(0.3, 0.7, 0.0);
        assert!(p.lift(p.project(q)).dist(q) < 1e-15);
        assert!(Plane::through(Point3::default(), Point3::new(1.0, 0.0, 0.0), Point3::new(2.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn example_4_1_precondition() {
        let e = example_4_1(1.0, 0.5, &SearchConfig::default(), &tol());
        assert!(matches!(e, Err(Sphere3Error::PreconditionRadius { .. })));
    }

    #[test]
    fn example_4_2_rejects_small_t() {
        let p = Example42Params {
            t: 2,
            ..Example42Params::default()
        };
        assert!(example_4_2(&p, &SearchConfig::default(), &tol()).is_err());
    }

    #[test]
    fn corner_points_solve_three_way_equalities() {
        let a = (Point3::new(1.0, 0.2, 0.0), 0.1);
        let b = (Point3::new(-0.3, 1.0, 0.4), -0.2);
        let c = (Point3::new(0.0, -0.5, 1.0), 0.05);
        for u in corner_points(a, b, c, Point3::new(0.0, 0.0, 1.0)) {
            assert!((u.norm() - 1.0).abs() < 1e-12);
            let v = |(x, y): (Point3, f64)| x.dot(u) + y;
            assert!((v(a) - v(b)).abs() < 1e-12 && (v(a) - v(c)).abs() < 1e-12);
        }
        let u = ridge_minimum(a, b).unwrap();
        let v = |(x, y): (Point3, f64)| x.dot(u) + y;
        assert!((v(a) - v(b)).abs() < 1e-12);
    }
}

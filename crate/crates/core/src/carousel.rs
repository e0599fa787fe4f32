//! The weak carousel property for two circles in a triangle.
//!
//! For sites `A0, A1, A2` and circles `U0, U1` inside their hull, some
//! `(j, k)` has `U_{1-k} ⊆ conv(U_k ∪ {A0, A1, A2} \ {A_j})`. This module
//! searches for those pairs, resolves the point-only case by triangle
//! decomposition, and traces the scale sweep `U_k(ζ) = circle(P_k, ζ·r_k)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{orientation, Circle2, Point2, Tolerance};
use crate::hull::{active_generators, circle_in_hull, ContainmentResult, GeneratorSet};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CarouselError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("point is not strictly inside the site triangle")]
    NotInterior,
    #[error("the two points coincide")]
    CoincidentPoints,
    #[error("instance generation exhausted after {attempts} attempts")]
    GenerationExhausted { attempts: usize },
}

/// Three sites and two circles inside their triangle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CarouselInstance {
    pub sites: [Point2; 3],
    pub circles: [Circle2; 2],
}

/// Same shape with the sites replaced by circles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorollaryInstance {
    pub generators: [Circle2; 3],
    pub circles: [Circle2; 2],
}

/// A solution `(j, k)`: `U_{1-k}` lies in the hull of `U_k` and every site
/// except `A_j`, with the recorded support slack.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub j: usize,
    pub k: usize,
    pub slack: f64,
}

/// Which part of `W(j, k, ξ*)` the scaled circle touches at the supremum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Tangency {
    /// Inclusion holds on the whole sweep.
    NoneAtOne,
    /// Inclusion already fails for the centers (`ζ = 0`).
    EmptyAtZero,
    /// A tangent segment between `U_k(ξ)` and a site.
    Leg,
    /// The arc of `U_k(ξ)` itself.
    FrontArc,
    /// The segment between the two remaining sites.
    BaseSide,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XiSweepReport {
    pub j: usize,
    pub k: usize,
    pub xi_star: f64,
    pub slack_at_xi_star: f64,
    pub tangency: Tangency,
    /// Direction of minimum slack at `xi_star`.
    pub direction: f64,
    /// Generators of `W(j, k, ξ*)` active at that direction; index 0 is
    /// `U_k(ξ*)`, 1 and 2 the remaining sites in order.
    pub active: Vec<usize>,
    pub evaluations: usize,
}

fn sites_as_circles(sites: &[Point2; 3]) -> [Circle2; 3] {
    sites.map(Circle2::point)
}

fn others(j: usize) -> [usize; 2] {
    [(j + 1) % 3, (j + 2) % 3]
}

/// `{u_k} ∪ generators \ {generators[j]}`, with `u_k` first.
fn pair_generators(generators: &[Circle2; 3], circles: &[Circle2; 2], j: usize, k: usize) -> GeneratorSet {
    let [a, b] = others(j);
    GeneratorSet::new(vec![circles[k], generators[a], generators[b]])
        .expect("three finite generators")
}

fn pair_result(
    generators: &[Circle2; 3],
    circles: &[Circle2; 2],
    j: usize,
    k: usize,
    tol: &Tolerance,
) -> ContainmentResult {
    circle_in_hull(&circles[1 - k], &pair_generators(generators, circles, j, k), tol)
}

fn search(generators: &[Circle2; 3], circles: &[Circle2; 2], tol: &Tolerance) -> Vec<Witness> {
    let mut out = Vec::new();
    for j in 0..3 {
        for k in 0..2 {
            let r = pair_result(generators, circles, j, k, tol);
            if r.contained {
                out.push(Witness { j, k, slack: r.slack });
            }
        }
    }
    out.sort_by(|a, b| b.slack.total_cmp(&a.slack).then((a.j, a.k).cmp(&(b.j, b.k))));
    out
}

fn check_hypothesis(
    generators: &[Circle2; 3],
    circles: &[Circle2; 2],
    tol: &Tolerance,
) -> Result<(), CarouselError> {
    if let Some(bad) = generators.iter().chain(circles).position(|c| !c.is_valid()) {
        return Err(CarouselError::InvalidInstance(format!(
            "circle {bad} is not finite with nonnegative radius"
        )));
    }
    let all = GeneratorSet::new(generators.to_vec()).expect("validated");
    for (i, u) in circles.iter().enumerate() {
        let r = circle_in_hull(u, &all, tol);
        if !r.contained {
            return Err(CarouselError::InvalidInstance(format!(
                "U{i} is not inside the hull of the sites (slack {})",
                r.slack
            )));
        }
    }
    Ok(())
}

impl CarouselInstance {
    pub fn new(sites: [Point2; 3], u0: Circle2, u1: Circle2) -> Self {
        Self {
            sites,
            circles: [u0, u1],
        }
    }

    pub fn is_collinear(&self, tol: &Tolerance) -> bool {
        let [a, b, c] = self.sites;
        orientation(a, b, c, tol) == 0
    }

    /// Checks the theorem's hypotheses: both circles inside the site
    /// triangle, and radius 0 whenever the sites are collinear.
    pub fn validate(&self, tol: &Tolerance) -> Result<(), CarouselError> {
        if self.sites.iter().any(|p| !p.is_finite()) {
            return Err(CarouselError::InvalidInstance("non-finite site".into()));
        }
        if self.is_collinear(tol) && self.circles.iter().any(|c| c.radius > 0.0) {
            return Err(CarouselError::InvalidInstance(
                "collinear sites admit only radius-0 circles".into(),
            ));
        }
        check_hypothesis(&sites_as_circles(&self.sites), &self.circles, tol)
    }

    /// `U_k(ζ)`: same centers, radii multiplied by `zeta`.
    pub fn scaled(&self, zeta: f64) -> Self {
        Self {
            sites: self.sites,
            circles: self.circles.map(|c| c.scaled(zeta)),
        }
    }

    /// `W(j, k, ·)` generators: `U_k` first, then the sites other than `A_j`.
    pub fn pair_generators(&self, j: usize, k: usize) -> GeneratorSet {
        pair_generators(&sites_as_circles(&self.sites), &self.circles, j, k)
    }

    /// Containment of `U_{1-k}` in `W(j, k)`.
    pub fn pair_result(&self, j: usize, k: usize, tol: &Tolerance) -> ContainmentResult {
        pair_result(&sites_as_circles(&self.sites), &self.circles, j, k, tol)
    }

    pub fn as_corollary(&self) -> CorollaryInstance {
        CorollaryInstance {
            generators: sites_as_circles(&self.sites),
            circles: self.circles,
        }
    }
}

impl CorollaryInstance {
    pub fn validate(&self, tol: &Tolerance) -> Result<(), CarouselError> {
        check_hypothesis(&self.generators, &self.circles, tol)
    }

    pub fn pair_result(&self, j: usize, k: usize, tol: &Tolerance) -> ContainmentResult {
        pair_result(&self.generators, &self.circles, j, k, tol)
    }
}

/// `U_k(ζ)` for both circles.
pub fn scaled_instance(inst: &CarouselInstance, zeta: f64) -> CarouselInstance {
    inst.scaled(zeta)
}

/// All `(j, k)` satisfying the carousel inclusion, most slack first.
///
/// Collinear sites (only valid with point circles) go through the same
/// search; the trivial witnesses that drop the middle site are among the
/// results.
pub fn witness_search(inst: &CarouselInstance, tol: &Tolerance) -> Result<Vec<Witness>, CarouselError> {
    inst.validate(tol)?;
    Ok(search(&sites_as_circles(&inst.sites), &inst.circles, tol))
}

/// The same search with three circle generators in place of the sites.
pub fn corollary_witness_search(
    inst: &CorollaryInstance,
    tol: &Tolerance,
) -> Result<Vec<Witness>, CarouselError> {
    inst.validate(tol)?;
    Ok(search(&inst.generators, &inst.circles, tol))
}

/// Point-only carousel rule by decomposing the triangle through `b0`.
///
/// If `b1` is interior to the sub-triangle obtained by replacing `A_j` with
/// `b0`, the answer is `(j, 0)`; otherwise `b1` lies inside a segment
/// `[b0, A_j]` and the answer is `(j, 1)`.
pub fn two_carousel_points(
    sites: &[Point2; 3],
    b0: Point2,
    b1: Point2,
    tol: &Tolerance,
) -> Result<Witness, CarouselError> {
    let sign = match orientation(sites[0], sites[1], sites[2], tol) {
        0 => return Err(CarouselError::NotInterior),
        s => s,
    };
    let strictly_inside = |tri: &[Point2; 3], q: Point2| {
        (0..3).all(|i| sign * orientation(tri[i], tri[(i + 1) % 3], q, tol) > 0)
    };
    if !strictly_inside(sites, b0) || !strictly_inside(sites, b1) {
        return Err(CarouselError::NotInterior);
    }
    if b0.dist(b1) <= tol.eps_geom {
        return Err(CarouselError::CoincidentPoints);
    }

    let verify = |j: usize, k: usize| {
        let b = [b0, b1];
        let [x, y] = others(j);
        let gens = GeneratorSet::from_points(&[b[k], sites[x], sites[y]]).expect("finite");
        let r = circle_in_hull(&Circle2::point(b[1 - k]), &gens, tol);
        Witness { j, k, slack: r.slack }
    };

    for j in 0..3 {
        let mut tri = *sites;
        tri[j] = b0;
        if strictly_inside(&tri, b1) {
            return Ok(verify(j, 0));
        }
    }
    for j in 0..3 {
        let a = sites[j];
        let along = (b1 - b0).dot(a - b0);
        if orientation(b0, a, b1, tol) == 0 && along > 0.0 && b1.dist(b0) < a.dist(b0) {
            return Ok(verify(j, 1));
        }
    }
    // Only reachable when b1 sits inside the collinearity band of some
    // [b0, A_j] without passing the betweenness test; take the sub-triangle
    // where b1 is deepest.
    let depth = |j: usize| {
        let mut tri = *sites;
        tri[j] = b0;
        (0..3)
            .map(|i| sign as f64 * (tri[(i + 1) % 3] - tri[i]).cross(b1 - tri[i]))
            .fold(f64::INFINITY, f64::min)
    };
    let j = (0..3)
        .max_by(|&a, &b| depth(a).total_cmp(&depth(b)))
        .expect("three candidates");
    Ok(verify(j, 0))
}

/// Traces `sup{ζ ∈ [0, 1] : U_{1-k}(ζ') ⊆ W(j, k, ζ') for all ζ' ≤ ζ}` for
/// a fixed pair.
///
/// A 64-point grid locates the first sign change of the slack, and bisection
/// narrows it until the bracket is at most `sweep_tol` wide and the slack at
/// the good end is inside a quarter of the decision band.
pub fn xi_sweep_fixed(
    inst: &CarouselInstance,
    j: usize,
    k: usize,
    sweep_tol: f64,
    tol: &Tolerance,
) -> Result<XiSweepReport, CarouselError> {
    if j > 2 || k > 1 {
        return Err(CarouselError::InvalidInstance(format!("pair ({j}, {k}) out of range")));
    }
    if !(sweep_tol > 0.0) {
        return Err(CarouselError::InvalidInstance("sweep tolerance must be positive".into()));
    }
    inst.validate(tol)?;
    let mut evaluations = 0usize;
    let mut eval = |z: f64| {
        evaluations += 1;
        inst.scaled(z).pair_result(j, k, tol)
    };

    const GRID: usize = 64;
    let at_zero = eval(0.0);
    if at_zero.slack < 0.0 {
        let (direction, active) = binding(inst, j, k, 0.0, &at_zero, tol);
        return Ok(XiSweepReport {
            j,
            k,
            xi_star: 0.0,
            slack_at_xi_star: at_zero.slack,
            tangency: Tangency::EmptyAtZero,
            direction,
            active,
            evaluations,
        });
    }
    let mut bracket = None;
    for i in 1..GRID {
        let z = i as f64 / (GRID - 1) as f64;
        if eval(z).slack < 0.0 {
            bracket = Some(((i - 1) as f64 / (GRID - 1) as f64, z));
            break;
        }
    }
    let Some((mut lo, mut hi)) = bracket else {
        let at_one = eval(1.0);
        let (direction, active) = binding(inst, j, k, 1.0, &at_one, tol);
        return Ok(XiSweepReport {
            j,
            k,
            xi_star: 1.0,
            slack_at_xi_star: at_one.slack,
            tangency: Tangency::NoneAtOne,
            direction,
            active,
            evaluations,
        });
    };

    let mut lo_res = eval(lo);
    for _ in 0..200 {
        if hi - lo <= sweep_tol && lo_res.slack <= 0.25 * tol.eps_decision {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let r = eval(mid);
        if r.slack >= 0.0 {
            lo = mid;
            lo_res = r;
        } else {
            hi = mid;
        }
    }
    let (direction, active) = binding(inst, j, k, lo, &lo_res, tol);
    let has_arc = active.contains(&0);
    let has_site = active.iter().any(|&i| i > 0);
    let tangency = match (has_arc, has_site) {
        (true, true) => Tangency::Leg,
        (true, false) => Tangency::FrontArc,
        _ => Tangency::BaseSide,
    };
    Ok(XiSweepReport {
        j,
        k,
        xi_star: lo,
        slack_at_xi_star: lo_res.slack,
        tangency,
        direction,
        active,
        evaluations,
    })
}

fn binding(
    inst: &CarouselInstance,
    j: usize,
    k: usize,
    zeta: f64,
    res: &ContainmentResult,
    tol: &Tolerance,
) -> (f64, Vec<usize>) {
    let gens = inst.scaled(zeta).pair_generators(j, k);
    let dir = res.critical_direction;
    (dir, active_generators(&gens, dir, tol.eps_decision))
}

/// Sampling ranges for the fuzz generators.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RngConfig {
    /// Coordinates are drawn from `[-coord_range, coord_range]`.
    pub coord_range: f64,
    pub radius_min: f64,
    pub radius_max: f64,
    /// Required hypothesis slack for every accepted circle.
    pub min_slack: f64,
    /// Sites spanning less area are redrawn.
    pub min_triangle_area: f64,
    pub max_attempts: usize,
}

impl Default for RngConfig {
    fn default() -> Self {
        Self {
            coord_range: 10.0,
            radius_min: 0.0,
            radius_max: 3.0,
            min_slack: 0.01,
            min_triangle_area: 4.0,
            max_attempts: 10_000,
        }
    }
}

/// How an instance came out of the generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub attempts: usize,
}

struct Sampler {
    rng: ChaCha8Rng,
    cfg: RngConfig,
    attempts: usize,
}

impl Sampler {
    fn new(seed: u64, cfg: &RngConfig) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            cfg: *cfg,
            attempts: 0,
        }
    }

    fn tick(&mut self) -> Result<(), CarouselError> {
        self.attempts += 1;
        if self.attempts > self.cfg.max_attempts {
            Err(CarouselError::GenerationExhausted {
                attempts: self.cfg.max_attempts,
            })
        } else {
            Ok(())
        }
    }

    fn coord(&mut self) -> f64 {
        let r = self.cfg.coord_range;
        self.rng.random_range(-r..=r)
    }

    fn point(&mut self) -> Point2 {
        Point2::new(self.coord(), self.coord())
    }

    fn radius(&mut self, cap: f64) -> f64 {
        let hi = self.cfg.radius_max.min(cap).max(self.cfg.radius_min);
        if hi <= self.cfg.radius_min {
            self.cfg.radius_min
        } else {
            self.rng.random_range(self.cfg.radius_min..=hi)
        }
    }

    fn triangle(&mut self) -> Result<[Point2; 3], CarouselError> {
        loop {
            self.tick()?;
            let s = [self.point(), self.point(), self.point()];
            let area = 0.5 * (s[1] - s[0]).cross(s[2] - s[0]).abs();
            if area >= self.cfg.min_triangle_area {
                return Ok(s);
            }
        }
    }

    /// Point of the triangle with uniform barycentric weights.
    fn inside(&mut self, s: &[Point2; 3]) -> (Point2, f64) {
        let mut a: f64 = self.rng.random();
        let mut b: f64 = self.rng.random();
        if a + b > 1.0 {
            a = 1.0 - a;
            b = 1.0 - b;
        }
        let w = [1.0 - a - b, a, b];
        let p = s[0] * w[0] + s[1] * w[1] + s[2] * w[2];
        (p, w.iter().copied().fold(f64::INFINITY, f64::min))
    }
}

fn inradius(s: &[Point2; 3]) -> f64 {
    let area = 0.5 * (s[1] - s[0]).cross(s[2] - s[0]).abs();
    let perim = s[0].dist(s[1]) + s[1].dist(s[2]) + s[2].dist(s[0]);
    2.0 * area / perim
}

/// Rejection-samples a circle until it sits in the hull of `gens` with the
/// configured slack; gives up on this hull after `budget` tries.
fn sample_circle_in(
    sm: &mut Sampler,
    gens: &GeneratorSet,
    lo: Point2,
    hi: Point2,
    radius_cap: f64,
    budget: usize,
    tol: &Tolerance,
) -> Result<Option<Circle2>, CarouselError> {
    for _ in 0..budget {
        sm.tick()?;
        let c = Point2::new(sm.rng.random_range(lo.x..=hi.x), sm.rng.random_range(lo.y..=hi.y));
        let u = Circle2::new(c, sm.radius(radius_cap));
        if circle_in_hull(&u, gens, tol).slack > sm.cfg.min_slack {
            return Ok(Some(u));
        }
    }
    Ok(None)
}

fn bbox(circles: &[Circle2]) -> (Point2, Point2) {
    let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for c in circles {
        lo.x = lo.x.min(c.center.x - c.radius);
        lo.y = lo.y.min(c.center.y - c.radius);
        hi.x = hi.x.max(c.center.x + c.radius);
        hi.y = hi.y.max(c.center.y + c.radius);
    }
    (lo, hi)
}

/// Deterministic valid instance from `seed`.
pub fn random_instance(
    seed: u64,
    cfg: &RngConfig,
) -> Result<(CarouselInstance, Provenance), CarouselError> {
    let tol = Tolerance::default();
    let mut sm = Sampler::new(seed, cfg);
    loop {
        let sites = sm.triangle()?;
        let gens = GeneratorSet::from_points(&sites).expect("finite");
        let (lo, hi) = bbox(&sites_as_circles(&sites));
        let cap = inradius(&sites);
        let Some(u0) = sample_circle_in(&mut sm, &gens, lo, hi, cap, 500, &tol)? else {
            continue;
        };
        let Some(u1) = sample_circle_in(&mut sm, &gens, lo, hi, cap, 500, &tol)? else {
            continue;
        };
        let inst = CarouselInstance::new(sites, u0, u1);
        return Ok((
            inst,
            Provenance {
                seed,
                attempts: sm.attempts,
            },
        ));
    }
}

/// Deterministic valid instance with three circle generators.
pub fn random_corollary_instance(
    seed: u64,
    cfg: &RngConfig,
) -> Result<(CorollaryInstance, Provenance), CarouselError> {
    let tol = Tolerance::default();
    let mut sm = Sampler::new(seed, cfg);
    loop {
        let sites = sm.triangle()?;
        let generators = [0, 1, 2].map(|i| {
            let r = sm.radius(f64::INFINITY);
            Circle2::new(sites[i], r)
        });
        let gens = GeneratorSet::new(generators.to_vec()).expect("finite");
        let (lo, hi) = bbox(&generators);
        let cap = generators
            .iter()
            .map(|g| g.radius)
            .fold(inradius(&sites), f64::max);
        let Some(u0) = sample_circle_in(&mut sm, &gens, lo, hi, cap, 500, &tol)? else {
            continue;
        };
        let Some(u1) = sample_circle_in(&mut sm, &gens, lo, hi, cap, 500, &tol)? else {
            continue;
        };
        return Ok((
            CorollaryInstance {
                generators,
                circles: [u0, u1],
            },
            Provenance {
                seed,
                attempts: sm.attempts,
            },
        ));
    }
}

/// Sites plus two distinct interior points, each with every barycentric
/// weight at least `1e-3`.
pub fn random_point_pair(
    seed: u64,
    cfg: &RngConfig,
) -> Result<([Point2; 3], Point2, Point2, Provenance), CarouselError> {
    let mut sm = Sampler::new(seed, cfg);
    let sites = sm.triangle()?;
    let pick = |sm: &mut Sampler| -> Result<Point2, CarouselError> {
        loop {
            sm.tick()?;
            let (p, w) = sm.inside(&sites);
            if w >= 1e-3 {
                return Ok(p);
            }
        }
    };
    let b0 = pick(&mut sm)?;
    let b1 = loop {
        let b = pick(&mut sm)?;
        if b.dist(b0) > 1e-6 {
            break b;
        }
    };
    Ok((
        sites,
        b0,
        b1,
        Provenance {
            seed,
            attempts: sm.attempts,
        },
    ))
}

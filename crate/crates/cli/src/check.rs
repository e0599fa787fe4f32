//! `check`, `sweep` and `repro3d`: one scenario in, one report out.

use std::f64::consts::TAU;

use carousel_core::carousel::{corollary_witness_search, XiSweepReport};
use carousel_core::geom::{reangle_contains, tangent_points_from_point};
use carousel_core::hull::{hull_boundary, BoundaryPiece};
use carousel_core::sphere3::{example_4_1, example_4_2, Example41Report, Example42Params, Example42Report};
use carousel_core::{
    circle_in_hull, two_carousel_points, witness_search, xi_sweep_fixed, CarouselInstance, Circle2, GeneratorSet,
    Point2, SearchConfig, Tangency, Tolerance, Witness,
};
use serde::Serialize;

use crate::scenario::{Kind, Scenario};
use crate::{CliError, Verdict};

/// Machine-readable result of one check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub kind: String,
    pub verdict: Verdict,
    pub summary: String,
    pub details: Details,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Details {
    Carousel(CarouselDetails),
    Points(PointsDetails),
    Sweep(SweepDetails),
    Ex41(Box<Example41Report>),
    Ex42(Box<Example42Report>),
    Reangle(ReangleDetails),
    Hull(HullDetails),
}

/// Every `(j, k)` inclusion; refuted ones carry their witness direction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairRow {
    pub j: usize,
    pub k: usize,
    pub contained: bool,
    pub slack: f64,
    pub witness_direction: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CarouselDetails {
    pub witnesses: Vec<Witness>,
    pub pairs: Vec<PairRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointsDetails {
    pub witness: Witness,
    /// Slack of the same inclusion recomputed by the containment engine.
    pub reverified_slack: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepCheck {
    pub report: XiSweepReport,
    /// Slack one sweep tolerance below `xi_star` (clamped to 0).
    pub slack_below: f64,
    /// Slack one sweep tolerance above `xi_star` (clamped to 1).
    pub slack_above: f64,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepDetails {
    pub tol: f64,
    pub sweeps: Vec<SweepCheck>,
    /// Pair with the largest `xi_star`, first in `(j, k)` order on ties.
    pub maximizing: (usize, usize),
    pub maximizing_tangency: Tangency,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReangleDetails {
    pub focus: Point2,
    pub circle: Circle2,
    pub tangent_points: (Point2, Point2),
    pub center_contained: bool,
    pub focus_excluded: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HullDetails {
    pub arcs: usize,
    pub segments: usize,
    pub omitted: Vec<usize>,
    pub area: f64,
    pub closure_error: f64,
    pub total_turning: f64,
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

fn pair_rows(f: impl Fn(usize, usize) -> carousel_core::ContainmentResult) -> Vec<PairRow> {
    let mut rows = Vec::with_capacity(6);
    for j in 0..3 {
        for k in 0..2 {
            let r = f(j, k);
            rows.push(PairRow {
                j,
                k,
                contained: r.contained,
                slack: r.slack,
                witness_direction: r.witness_direction,
            });
        }
    }
    rows
}

fn carousel_report(kind: Kind, witnesses: Vec<Witness>, pairs: Vec<PairRow>) -> Report {
    let verdict = Verdict::from_ok(!witnesses.is_empty());
    let summary = match witnesses.first() {
        Some(w) => format!("{} witnesses; best (j={}, k={}) slack {:.6e}", witnesses.len(), w.j, w.k, w.slack),
        None => "no (j, k) satisfies the inclusion".into(),
    };
    Report {
        kind: kind.to_string(),
        verdict,
        summary,
        details: Details::Carousel(CarouselDetails { witnesses, pairs }),
    }
}

/// Sweeps one pair and re-evaluates the slack on both sides of `xi_star`.
pub fn sweep_check(
    inst: &CarouselInstance,
    j: usize,
    k: usize,
    sweep_tol: f64,
    tol: &Tolerance,
) -> Result<SweepCheck, CliError> {
    let report = xi_sweep_fixed(inst, j, k, sweep_tol, tol).map_err(invalid)?;
    let slack = |z: f64| inst.scaled(z.clamp(0.0, 1.0)).pair_result(j, k, tol).slack;
    let slack_below = slack(report.xi_star - sweep_tol);
    let slack_above = slack(report.xi_star + sweep_tol);
    let consistent = match report.tangency {
        Tangency::NoneAtOne => report.xi_star == 1.0 && slack(1.0) >= -tol.eps_decision,
        Tangency::EmptyAtZero => report.xi_star == 0.0 && report.slack_at_xi_star < 0.0,
        _ => {
            report.slack_at_xi_star.abs() < tol.eps_decision
                && slack_below >= -tol.eps_decision
                && slack_above < tol.eps_decision
        }
    };
    Ok(SweepCheck {
        report,
        slack_below,
        slack_above,
        consistent,
    })
}

fn sweep_details(
    inst: &CarouselInstance,
    pairs: &[(usize, usize)],
    sweep_tol: f64,
    tol: &Tolerance,
) -> Result<SweepDetails, CliError> {
    let sweeps = pairs
        .iter()
        .map(|&(j, k)| sweep_check(inst, j, k, sweep_tol, tol))
        .collect::<Result<Vec<_>, _>>()?;
    let best = sweeps
        .iter()
        .fold(None::<&SweepCheck>, |acc, s| match acc {
            Some(a) if a.report.xi_star >= s.report.xi_star => Some(a),
            _ => Some(s),
        })
        .expect("at least one pair");
    Ok(SweepDetails {
        tol: sweep_tol,
        maximizing: (best.report.j, best.report.k),
        maximizing_tangency: best.report.tangency,
        sweeps,
    })
}

fn sweep_report(kind: Kind, d: SweepDetails) -> Report {
    let ok = d.sweeps.iter().all(|s| s.consistent) && d.maximizing_tangency != Tangency::BaseSide;
    let summary = format!(
        "{} sweeps; max xi_star on (j={}, k={}) with tangency {:?}",
        d.sweeps.len(),
        d.maximizing.0,
        d.maximizing.1,
        d.maximizing_tangency
    );
    Report {
        kind: kind.to_string(),
        verdict: Verdict::from_ok(ok),
        summary,
        details: Details::Sweep(d),
    }
}

const ALL_PAIRS: [(usize, usize); 6] = [(0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1)];

/// Runs a scenario through the check for its kind.
pub fn run_scenario(sc: &Scenario) -> Result<Report, CliError> {
    let tol = sc.tolerance();
    match sc.kind {
        Kind::Theorem2d => {
            let inst = sc.instance();
            let witnesses = witness_search(&inst, &tol).map_err(invalid)?;
            let pairs = pair_rows(|j, k| inst.pair_result(j, k, &tol));
            Ok(carousel_report(sc.kind, witnesses, pairs))
        }
        Kind::Corollary2d => {
            let inst = sc.corollary();
            let witnesses = corollary_witness_search(&inst, &tol).map_err(invalid)?;
            let pairs = pair_rows(|j, k| inst.pair_result(j, k, &tol));
            Ok(carousel_report(sc.kind, witnesses, pairs))
        }
        Kind::Points2d => {
            let inst = sc.instance();
            let (b0, b1) = (inst.circles[0].center, inst.circles[1].center);
            let witness = two_carousel_points(&inst.sites, b0, b1, &tol).map_err(invalid)?;
            let reverified_slack = inst.pair_result(witness.j, witness.k, &tol).slack;
            let ok = reverified_slack >= -tol.eps_decision;
            Ok(Report {
                kind: sc.kind.to_string(),
                verdict: Verdict::from_ok(ok),
                summary: format!("(j={}, k={}) re-verified with slack {reverified_slack:.6e}", witness.j, witness.k),
                details: Details::Points(PointsDetails {
                    witness,
                    reverified_slack,
                }),
            })
        }
        Kind::Sweep => {
            let p = sc.params();
            let pairs: Vec<(usize, usize)> = match (p.j, p.k) {
                (Some(j), Some(k)) => vec![(j, k)],
                _ => ALL_PAIRS.to_vec(),
            };
            let d = sweep_details(&sc.instance(), &pairs, p.tol.unwrap_or(1e-6), &tol)?;
            Ok(sweep_report(sc.kind, d))
        }
        Kind::Sphere3Ex41 => {
            let (side, r) = sc.ex41();
            Ok(ex41_report(example_4_1(side, r, &SearchConfig::default(), &tol).map_err(invalid)?))
        }
        Kind::Sphere3Ex42 => {
            Ok(ex42_report(example_4_2(&sc.ex42(), &SearchConfig::default(), &tol).map_err(invalid)?))
        }
        Kind::Reangle => {
            let focus = sc.site_points()[0];
            let circle = sc.circle_list()[0];
            let tangent_points = tangent_points_from_point(focus, &circle, &tol).map_err(invalid)?;
            let center_contained = reangle_contains(focus, &circle, circle.center, &tol).map_err(invalid)?;
            let focus_excluded = !reangle_contains(focus, &circle, focus, &tol).map_err(invalid)?;
            Ok(Report {
                kind: sc.kind.to_string(),
                verdict: Verdict::from_ok(center_contained && focus_excluded),
                summary: format!("center contained: {center_contained}, focus excluded: {focus_excluded}"),
                details: Details::Reangle(ReangleDetails {
                    focus,
                    circle,
                    tangent_points,
                    center_contained,
                    focus_excluded,
                }),
            })
        }
        Kind::Hull2d => {
            let gens = hull_generators(sc)?;
            let b = hull_boundary(&gens, &tol).map_err(invalid)?;
            let arcs = b.pieces.iter().filter(|p| matches!(p, BoundaryPiece::Arc { .. })).count();
            let d = HullDetails {
                arcs,
                segments: b.pieces.len() - arcs,
                omitted: b.omitted.clone(),
                area: b.area(),
                closure_error: b.closure_error(),
                total_turning: b.total_turning(),
            };
            let ok = d.closure_error <= tol.eps_geom && (d.total_turning - TAU).abs() < 1e-9;
            Ok(Report {
                kind: sc.kind.to_string(),
                verdict: Verdict::from_ok(ok),
                summary: format!("{} arcs, {} segments, area {:.6}", d.arcs, d.segments, d.area),
                details: Details::Hull(d),
            })
        }
    }
}

pub(crate) fn hull_generators(sc: &Scenario) -> Result<GeneratorSet, CliError> {
    let mut all = sc.site_circles();
    all.extend(sc.circle_list());
    GeneratorSet::new(all).map_err(invalid)
}

/// The fixed-pair sweep behind the `sweep` verb.
pub fn run_sweep(sc: &Scenario, j: usize, k: usize, sweep_tol: f64) -> Result<Report, CliError> {
    if !matches!(sc.kind, Kind::Theorem2d | Kind::Sweep | Kind::Points2d) {
        return Err(CliError::Invalid(format!("cannot sweep a {} scenario", sc.kind)));
    }
    if j > 2 || k > 1 {
        return Err(CliError::Invalid(format!("pair ({j}, {k}) out of range")));
    }
    let d = sweep_details(&sc.instance(), &[(j, k)], sweep_tol, &sc.tolerance())?;
    Ok(sweep_report(Kind::Sweep, d))
}

fn ex41_report(rep: Example41Report) -> Report {
    let certified = rep
        .pairs
        .iter()
        .filter(|p| p.j == 3)
        .all(|p| p.result.projection_certificate.as_ref().is_some_and(|c| c.refuted));
    let ok = rep.all_refuted && certified;
    let worst = rep.pairs.iter().map(|p| p.result.slack).fold(f64::NEG_INFINITY, f64::max);
    Report {
        kind: Kind::Sphere3Ex41.to_string(),
        verdict: Verdict::from_ok(ok),
        summary: format!(
            "{} of {} inclusions refuted; largest slack {worst:.6e}",
            rep.pairs.iter().filter(|p| p.refuted()).count(),
            rep.pairs.len()
        ),
        details: Details::Ex41(Box::new(rep)),
    }
}

fn ex42_report(rep: Example42Report) -> Report {
    let ok = rep.all_refuted
        && rep.tangency_residual < 1e-9
        && rep.min_face_clearance > 0.0
        && rep.pairwise_non_nested;
    let worst = rep.pairs.iter().map(|p| p.result.slack).fold(f64::NEG_INFINITY, f64::max);
    Report {
        kind: Kind::Sphere3Ex42.to_string(),
        verdict: Verdict::from_ok(ok),
        summary: format!(
            "t={}: {} of {} inclusions refuted; largest slack {worst:.6e}; tangency residual {:.1e}",
            rep.params.t,
            rep.pairs.iter().filter(|p| p.refuted()).count(),
            rep.pairs.len(),
            rep.tangency_residual
        ),
        details: Details::Ex42(Box::new(rep)),
    }
}

/// `repro3d --example 4.1|4.2`.
pub fn run_repro3d(
    example: &str,
    t: Option<usize>,
    r: Option<f64>,
    side: Option<f64>,
    factor: Option<f64>,
) -> Result<Report, CliError> {
    let tol = Tolerance::default();
    let cfg = SearchConfig::default();
    match example {
        "4.1" => {
            let side = side.unwrap_or(1.0);
            let rep = example_4_1(side, r.unwrap_or(side / 10.0), &cfg, &tol).map_err(invalid)?;
            Ok(ex41_report(rep))
        }
        "4.2" => {
            let d = Example42Params::default();
            let params = Example42Params {
                t: t.unwrap_or(d.t),
                arc_radius_factor: factor.unwrap_or(d.arc_radius_factor),
                side: side.unwrap_or(d.side),
            };
            Ok(ex42_report(example_4_2(&params, &cfg, &tol).map_err(invalid)?))
        }
        other => Err(CliError::Invalid(format!("unknown example {other:?}; expected 4.1 or 4.2"))),
    }
}

/// Re-checks a witness list against the containment engine; used by the
/// fuzz campaign.
pub(crate) fn witnesses_reverify(inst: &CarouselInstance, ws: &[Witness], tol: &Tolerance) -> bool {
    ws.iter().all(|w| {
        let r = circle_in_hull(&inst.circles[1 - w.k], &inst.pair_generators(w.j, w.k), tol);
        r.contained && r.slack == w.slack
    })
}

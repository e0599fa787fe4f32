//! Seeded fuzz campaigns and the sampling-oracle cross-check.
//!
//! Trial `i` of a campaign with seed `s` uses seed `s + i`, so any single
//! failure reproduces on its own. Trials are independent; results are
//! sorted by seed before reporting, which keeps reports identical whatever
//! the worker count.

use std::path::{Path, PathBuf};

use carousel_core::carousel::{
    corollary_witness_search, random_corollary_instance, random_instance, random_point_pair,
};
use carousel_core::oracle::{sampled_contains, SAMPLES_PER_CIRCLE};
use carousel_core::{
    circle_in_hull, two_carousel_points, witness_search, CarouselInstance, Circle2, GeneratorSet, Point2, RngConfig,
    Tolerance,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::check::witnesses_reverify;
use crate::scenario::{Kind, Scenario};
use crate::{thread_count, CliError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum FuzzKind {
    Theorem2d,
    Corollary2d,
    Points2d,
}

/// Slack bucket boundaries; bucket `i` holds values in `[EDGES[i-1], EDGES[i])`.
const EDGES: [f64; 7] = [0.0, 1e-9, 1e-6, 1e-3, 1e-1, 1.0, 10.0];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    /// `edges.len() + 1` counts: below the first edge, between edges, and
    /// at or above the last.
    pub counts: Vec<usize>,
}

impl Histogram {
    fn new() -> Self {
        Self {
            edges: EDGES.to_vec(),
            counts: vec![0; EDGES.len() + 1],
        }
    }

    fn add(&mut self, v: f64) {
        let i = EDGES.iter().take_while(|&&e| v >= e).count();
        self.counts[i] += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub seed: u64,
    pub scenario: Scenario,
    pub diagnostics: String,
    /// Where the reproduction scenario was written, if anywhere.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dump: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub kind: FuzzKind,
    pub seed: u64,
    pub trials: usize,
    pub failures: Vec<Failure>,
    /// Best-witness slack of every successful trial.
    pub slack_histogram: Histogram,
    pub min_best_slack: f64,
}

impl FuzzReport {
    pub fn exit_code(&self) -> i32 {
        if self.failures.is_empty() {
            0
        } else {
            1
        }
    }
}

/// Outcome of one seeded trial: best slack, or a failure.
enum Trial {
    Pass(f64),
    Fail(Box<Failure>),
}

fn fail(seed: u64, scenario: Scenario, diagnostics: String) -> Trial {
    Trial::Fail(Box::new(Failure {
        seed,
        scenario,
        diagnostics,
        dump: None,
    }))
}

fn theorem_trial(seed: u64, cfg: &RngConfig, tol: &Tolerance) -> Result<Trial, CliError> {
    let (inst, _) = random_instance(seed, cfg).map_err(|e| CliError::Invalid(e.to_string()))?;
    let scenario = Scenario::from_instance(Kind::Theorem2d, &inst, Some(seed));
    Ok(match witness_search(&inst, tol) {
        Err(e) => fail(seed, scenario, e.to_string()),
        Ok(ws) if ws.is_empty() => fail(seed, scenario, "no witness".into()),
        Ok(ws) if ws[0].slack < -1e-9 => fail(seed, scenario, format!("best slack {}", ws[0].slack)),
        Ok(ws) if !witnesses_reverify(&inst, &ws, tol) => fail(seed, scenario, "witness did not re-verify".into()),
        Ok(ws) => Trial::Pass(ws[0].slack),
    })
}

fn corollary_trial(seed: u64, cfg: &RngConfig, tol: &Tolerance) -> Result<Trial, CliError> {
    let (inst, _) = random_corollary_instance(seed, cfg).map_err(|e| CliError::Invalid(e.to_string()))?;
    let scenario = Scenario::from_corollary(&inst, Some(seed));
    Ok(match corollary_witness_search(&inst, tol) {
        Err(e) => fail(seed, scenario, e.to_string()),
        Ok(ws) if ws.is_empty() => fail(seed, scenario, "no witness".into()),
        Ok(ws) => Trial::Pass(ws[0].slack),
    })
}

fn points_trial(seed: u64, cfg: &RngConfig, tol: &Tolerance) -> Result<Trial, CliError> {
    let (sites, b0, b1, _) = random_point_pair(seed, cfg).map_err(|e| CliError::Invalid(e.to_string()))?;
    let inst = CarouselInstance::new(sites, Circle2::point(b0), Circle2::point(b1));
    let scenario = Scenario::from_instance(Kind::Points2d, &inst, Some(seed));
    Ok(match two_carousel_points(&sites, b0, b1, tol) {
        Err(e) => fail(seed, scenario, e.to_string()),
        Ok(w) => {
            let b = [b0, b1];
            let mut pts = vec![b[w.k]];
            pts.extend((0..3).filter(|&i| i != w.j).map(|i| sites[i]));
            let gens = GeneratorSet::from_points(&pts).expect("finite points");
            let r = circle_in_hull(&Circle2::point(b[1 - w.k]), &gens, tol);
            if r.contained {
                Trial::Pass(r.slack)
            } else {
                fail(seed, scenario, format!("(j={}, k={}) failed to re-verify, slack {}", w.j, w.k, r.slack))
            }
        }
    })
}

/// Runs `f` on every seed, in parallel when `CAROUSEL_THREADS` asks for it,
/// and returns results in seed order.
fn fan_out<T: Send>(seeds: Vec<u64>, f: impl Fn(u64) -> T + Sync + Send) -> Result<Vec<T>, CliError> {
    match thread_count() {
        None => Ok(seeds.into_iter().map(f).collect()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Invalid(e.to_string()))?;
            // indexed collect preserves input order
            Ok(pool.install(|| seeds.into_par_iter().map(f).collect()))
        }
    }
}

/// `n` seeded trials of `kind`. Failing instances are written as scenario
/// files under `dump_dir` when one is given.
pub fn run_fuzz(kind: FuzzKind, n: usize, seed: u64, dump_dir: Option<&Path>) -> Result<FuzzReport, CliError> {
    if n == 0 {
        return Err(CliError::Invalid("n must be at least 1".into()));
    }
    let cfg = RngConfig::default();
    let tol = Tolerance::default();
    let seeds: Vec<u64> = (0..n as u64).map(|i| seed.wrapping_add(i)).collect();
    let trials = fan_out(seeds, |s| match kind {
        FuzzKind::Theorem2d => theorem_trial(s, &cfg, &tol),
        FuzzKind::Corollary2d => corollary_trial(s, &cfg, &tol),
        FuzzKind::Points2d => points_trial(s, &cfg, &tol),
    })?;

    let mut hist = Histogram::new();
    let mut failures = Vec::new();
    let mut min_best_slack = f64::INFINITY;
    for t in trials {
        match t? {
            Trial::Pass(s) => {
                hist.add(s);
                min_best_slack = min_best_slack.min(s);
            }
            Trial::Fail(f) => failures.push(*f),
        }
    }
    if let Some(dir) = dump_dir {
        if !failures.is_empty() {
            std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        }
        for f in &mut failures {
            let path: PathBuf = dir.join(format!("{}-{}.json", kind_name(kind), f.seed));
            std::fs::write(&path, f.scenario.to_json()).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            f.dump = Some(path.display().to_string());
        }
    }
    Ok(FuzzReport {
        kind,
        seed,
        trials: n,
        failures,
        slack_histogram: hist,
        min_best_slack,
    })
}

fn kind_name(kind: FuzzKind) -> &'static str {
    match kind {
        FuzzKind::Theorem2d => "theorem2d",
        FuzzKind::Corollary2d => "corollary2d",
        FuzzKind::Points2d => "points2d",
    }
}

/// Band inside which the engine and the sampling oracle may disagree.
pub const ORACLE_BAND: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disagreement {
    pub index: usize,
    pub target: Circle2,
    pub generators: Vec<Circle2>,
    pub slack: f64,
    pub engine: bool,
    pub oracle: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub n: usize,
    pub seed: u64,
    pub contained: usize,
    pub agreements: usize,
    pub disagreements: Vec<Disagreement>,
    /// Disagreements with `|slack| > ORACLE_BAND`; must be zero.
    pub outside_band: usize,
    pub max_disagreement_abs_slack: f64,
}

impl OracleReport {
    pub fn agreement_rate(&self) -> f64 {
        self.agreements as f64 / self.n as f64
    }

    pub fn exit_code(&self) -> i32 {
        if self.outside_band == 0 {
            0
        } else {
            1
        }
    }
}

/// Random containment query: 1 to 5 generators with coordinates in
/// `[-10, 10]` and radii in `[0, 3]`, and a target centered near their
/// centroid so that both verdicts are common.
pub fn random_query(seed: u64) -> (Circle2, Vec<Circle2>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=5usize);
    let circle = |rng: &mut ChaCha8Rng| {
        let r = if rng.random::<f64>() < 0.2 {
            0.0
        } else {
            rng.random_range(0.0..3.0)
        };
        Circle2::new(
            Point2::new(rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0)),
            r,
        )
    };
    let gens: Vec<Circle2> = (0..n).map(|_| circle(&mut rng)).collect();
    let mut c = Point2::ORIGIN;
    for g in &gens {
        c = c + g.center * (1.0 / n as f64);
    }
    let jitter = Point2::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
    let target = Circle2::new(c + jitter, rng.random_range(0.0..3.0));
    (target, gens)
}

/// Compares `circle_in_hull` with the sampled-polygon oracle on `n` queries.
pub fn run_oracle_check(n: usize, seed: u64) -> Result<OracleReport, CliError> {
    if n == 0 {
        return Err(CliError::Invalid("n must be at least 1".into()));
    }
    let tol = Tolerance::default();
    let seeds: Vec<u64> = (0..n as u64).map(|i| seed.wrapping_add(i)).collect();
    let rows = fan_out(seeds, |s| {
        let (target, gens) = random_query(s);
        let r = circle_in_hull(&target, &GeneratorSet::new(gens.clone()).expect("valid"), &tol);
        let oracle = sampled_contains(&target, &gens, SAMPLES_PER_CIRCLE);
        (target, gens, r, oracle)
    })?;
    let mut report = OracleReport {
        n,
        seed,
        contained: 0,
        agreements: 0,
        disagreements: vec![],
        outside_band: 0,
        max_disagreement_abs_slack: 0.0,
    };
    for (index, (target, generators, r, oracle)) in rows.into_iter().enumerate() {
        report.contained += r.contained as usize;
        if r.contained == oracle {
            report.agreements += 1;
            continue;
        }
        report.outside_band += (r.slack.abs() > ORACLE_BAND) as usize;
        report.max_disagreement_abs_slack = report.max_disagreement_abs_slack.max(r.slack.abs());
        report.disagreements.push(Disagreement {
            index,
            target,
            generators,
            slack: r.slack,
            engine: r.contained,
            oracle,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_buckets() {
        let mut h = Histogram::new();
        for v in [-1.0, 0.0, 5e-7, 0.5, 100.0] {
            h.add(v);
        }
        assert_eq!(h.counts, vec![1, 1, 1, 0, 0, 1, 0, 1]);
    }

    #[test]
    fn queries_are_seeded() {
        assert_eq!(random_query(5), random_query(5));
        assert_ne!(random_query(5), random_query(6));
    }
}

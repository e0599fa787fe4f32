use std::path::PathBuf;
use std::process::{Command, Output};

use carousel_cli::campaign::{run_fuzz, FuzzKind};
use carousel_cli::{run_scenario, Kind, Scenario};
use carousel_core::{CarouselInstance, Circle2, Point2};

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(format!("{name}.json"))
}

fn carousel(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_carousel"));
    cmd.args(args).env_remove("CAROUSEL_THREADS");
    if let Some(t) = threads {
        cmd.env("CAROUSEL_THREADS", t);
    }
    cmd.output().expect("run carousel")
}

#[test]
fn exit_codes_follow_the_contract() {
    let ok = carousel(&["check", scenario("concentric").to_str().unwrap()], None);
    assert_eq!(ok.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["verdict"], "verified");
    assert_eq!(v["details"]["witnesses"].as_array().unwrap().len(), 3);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(carousel(&["check", bad.to_str().unwrap()], None).status.code(), Some(2));
    std::fs::write(&bad, r#"{"schema":"carousel/1","kind":"theorem2d","sites":[]}"#).unwrap();
    assert_eq!(carousel(&["check", bad.to_str().unwrap()], None).status.code(), Some(2));
    assert_eq!(carousel(&["check", "/nonexistent/x.json"], None).status.code(), Some(2));
    assert_eq!(carousel(&["repro3d", "--example", "4.1", "--r", "0.5"], None).status.code(), Some(2));
    assert_eq!(carousel(&["repro3d", "--example", "9.9"], None).status.code(), Some(2));
    assert_eq!(carousel(&["frobnicate"], None).status.code(), Some(2));

    // circles outside the triangle violate the hypothesis
    std::fs::write(
        &bad,
        r#"{"schema":"carousel/1","kind":"theorem2d","sites":[[0,0],[6,0],[0,6]],"circles":[[3,3,1],[1,1,0.5]]}"#,
    )
    .unwrap();
    assert_eq!(carousel(&["check", bad.to_str().unwrap()], None).status.code(), Some(2));
}

#[test]
fn refuted_claim_exits_one() {
    // a decision band wider than the refutation slacks turns them into ties
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("wide.json");
    std::fs::write(
        &p,
        r#"{"schema":"carousel/1","kind":"sphere3_ex41","params":{"side":1,"r":0.05},
            "tolerance":{"eps_geom":1e-9,"eps_decision":0.1}}"#,
    )
    .unwrap();
    let out = carousel(&["check", p.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "refuted");

    // a segment has no two-dimensional hull to trace
    let seg = dir.path().join("seg.json");
    std::fs::write(&seg, r#"{"schema":"carousel/1","kind":"hull2d","sites":[[0,0],[4,0]]}"#).unwrap();
    assert_eq!(carousel(&["check", seg.to_str().unwrap()], None).status.code(), Some(2));
}

#[test]
fn scenario_kinds_verify() {
    for (name, kind) in [
        ("concentric", Kind::Theorem2d),
        ("theorem_general", Kind::Theorem2d),
        ("corollary", Kind::Corollary2d),
        ("points", Kind::Points2d),
        ("sweep", Kind::Sweep),
        ("reangle", Kind::Reangle),
        ("trapezoid", Kind::Hull2d),
        ("ex41", Kind::Sphere3Ex41),
        ("ex42_t4", Kind::Sphere3Ex42),
    ] {
        let sc = Scenario::load(&scenario(name)).unwrap();
        assert_eq!(sc.kind, kind);
        let r = run_scenario(&sc).unwrap();
        assert_eq!(r.exit_code(), 0, "{name}: {}", r.summary);
    }
}

#[test]
fn refutations_embed_standalone_witnesses() {
    let sc = Scenario::load(&scenario("theorem_general")).unwrap();
    let v = serde_json::to_value(run_scenario(&sc).unwrap()).unwrap();
    let inst = sc.instance();
    for row in v["details"]["pairs"].as_array().unwrap() {
        if row["contained"].as_bool().unwrap() {
            assert!(row["witness_direction"].is_null());
            continue;
        }
        let (j, k) = (row["j"].as_u64().unwrap() as usize, row["k"].as_u64().unwrap() as usize);
        let th = row["witness_direction"].as_f64().unwrap();
        // recompute the support gap from scratch
        let u = Point2::unit(th);
        let target = inst.circles[1 - k];
        let mut h = inst.circles[k].center.dot(u) + inst.circles[k].radius;
        for i in (0..3).filter(|&i| i != j) {
            h = h.max(inst.sites[i].dot(u));
        }
        assert!(target.center.dot(u) + target.radius > h);
    }
}

#[test]
fn thread_count_does_not_change_reports() {
    for kind in ["theorem2d", "corollary2d", "points2d"] {
        let args = ["fuzz", "--kind", kind, "--n", "200", "--seed", "77"];
        let seq = carousel(&args, None);
        let par = carousel(&args, Some("4"));
        assert_eq!(seq.status.code(), Some(0));
        assert_eq!(seq.stdout, par.stdout, "{kind}");
    }
    let seq = carousel(&["oracle", "--n", "40", "--seed", "3"], None);
    let par = carousel(&["oracle", "--n", "40", "--seed", "3"], Some("3"));
    assert_eq!(seq.stdout, par.stdout);
}

#[test]
fn fuzz_trials_are_reproducible_one_by_one() {
    let whole = run_fuzz(FuzzKind::Theorem2d, 5, 100, None).unwrap();
    let mut hist = vec![0; whole.slack_histogram.counts.len()];
    for s in 100..105 {
        let one = run_fuzz(FuzzKind::Theorem2d, 1, s, None).unwrap();
        for (h, c) in hist.iter_mut().zip(&one.slack_histogram.counts) {
            *h += c;
        }
    }
    assert_eq!(hist, whole.slack_histogram.counts);
}

#[test]
fn failure_dumps_are_runnable_scenarios() {
    // dump format: write what a failure would contain and run it back
    let inst = CarouselInstance::new(
        [Point2::new(0.0, 0.0), Point2::new(6.0, 0.0), Point2::new(0.0, 6.0)],
        Circle2::new(Point2::new(2.0, 2.0), 1.0),
        Circle2::new(Point2::new(1.5, 1.0), 0.4),
    );
    let sc = Scenario::from_instance(Kind::Theorem2d, &inst, Some(42));
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("dump.json");
    std::fs::write(&p, sc.to_json()).unwrap();
    let out = carousel(&["check", p.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(Scenario::load(&p).unwrap(), sc);

    let r = run_fuzz(FuzzKind::Points2d, 20, 5, Some(dir.path())).unwrap();
    assert!(r.failures.is_empty());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn sweep_verb_reports_pair() {
    let out = carousel(
        &["sweep", scenario("sweep").to_str().unwrap(), "--j", "0", "--k", "0", "--tol", "1e-4"],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rep = &v["details"]["sweeps"][0]["report"];
    assert!(rep["xi_star"].as_f64().unwrap() < 1.0);
    assert_eq!(rep["tangency"], "LEG");
    let bad = carousel(&["sweep", scenario("ex41").to_str().unwrap(), "--j", "0", "--k", "0"], None);
    assert_eq!(bad.status.code(), Some(2));
}

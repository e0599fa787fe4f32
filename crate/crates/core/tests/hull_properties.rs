use std::f64::consts::TAU;

use carousel_core::hull::{coverage_arc, hull_boundary, support, ArcInterval};
use carousel_core::oracle::sampled_contains;
use carousel_core::{circle_in_hull, min_slack, Circle2, GeneratorSet, Point2, Tolerance};
use proptest::prelude::*;

fn circle() -> impl Strategy<Value = Circle2> {
    (-10.0..10.0f64, -10.0..10.0f64, prop_oneof![Just(0.0), 0.0..3.0f64])
        .prop_map(|(x, y, r)| Circle2::new(Point2::new(x, y), r))
}

fn gens(max: usize) -> impl Strategy<Value = Vec<Circle2>> {
    prop::collection::vec(circle(), 1..=max)
}

/// Arc-cover verdict computed directly from the per-generator arcs on a
/// dense direction grid, with tangency slivers excused by the slack band.
fn arcs_cover(target: &Circle2, g: &[Circle2], n: usize) -> bool {
    let arcs: Vec<ArcInterval> = g.iter().map(|c| coverage_arc(c, target)).collect();
    (0..n).all(|i| {
        let th = TAU * i as f64 / n as f64;
        arcs.iter().any(|a| a.contains(th))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn adding_a_generator_never_hurts(target in circle(), g in gens(5), extra in circle()) {
        let tol = Tolerance::default();
        let set = GeneratorSet::new(g).unwrap();
        let before = min_slack(&target, &set, &tol);
        let after = min_slack(&target, &set.with(extra), &tol);
        prop_assert!(after >= before - 1e-12);
        if set.len() > 1 {
            let fewer = min_slack(&target, &set.without(0).unwrap(), &tol);
            prop_assert!(fewer <= before + 1e-12);
        }
    }

    #[test]
    fn rigid_motions_preserve_slack(target in circle(), g in gens(5), rot in 0.0..TAU,
                                    sx in -5.0..5.0f64, sy in -5.0..5.0f64, s in 0.1..10.0f64) {
        let tol = Tolerance::default();
        let base = min_slack(&target, &GeneratorSet::new(g.clone()).unwrap(), &tol);
        let shift = Point2::new(sx, sy);
        let moved = |c: &Circle2| Circle2::new(c.center.rotate(rot) + shift, c.radius);
        let m = min_slack(&moved(&target), &GeneratorSet::new(g.iter().map(moved).collect()).unwrap(), &tol);
        prop_assert!((m - base).abs() < 1e-9);
        let scaled = |c: &Circle2| Circle2::new(c.center * s, c.radius * s);
        let sc = min_slack(&scaled(&target), &GeneratorSet::new(g.iter().map(scaled).collect()).unwrap(), &tol);
        prop_assert!((sc - s * base).abs() < 1e-9 * s.max(1.0) * (1.0 + base.abs()));
    }

    #[test]
    fn three_views_of_containment_agree(target in circle(), g in gens(5)) {
        let tol = Tolerance::default();
        let set = GeneratorSet::new(g.clone()).unwrap();
        let r = circle_in_hull(&target, &set, &tol);
        prop_assert_eq!(r.contained, r.slack >= -tol.eps_decision);
        prop_assert_eq!(r.witness_direction.is_some(), !r.contained);
        if let Some(w) = r.witness_direction {
            let h_t = target.center.dot(Point2::unit(w)) + target.radius;
            prop_assert!(h_t - support(&set, w) > 0.0);
            prop_assert!((support(&set, w) - h_t - r.slack).abs() < 1e-9);
        }
        if r.slack.abs() > 1e-4 {
            prop_assert_eq!(arcs_cover(&target, &g, 20_000), r.contained);
        }
        // slack really is the minimum: no grid direction does better
        for i in 0..720 {
            let th = TAU * i as f64 / 720.0;
            let s = support(&set, th) - target.center.dot(Point2::unit(th)) - target.radius;
            prop_assert!(s >= r.slack - 1e-9);
        }
    }

    #[test]
    fn agrees_with_sampling_oracle(target in circle(), g in gens(4)) {
        let tol = Tolerance::default();
        let r = circle_in_hull(&target, &GeneratorSet::new(g.clone()).unwrap(), &tol);
        if r.slack.abs() > 1e-4 {
            prop_assert_eq!(sampled_contains(&target, &g, 3600), r.contained);
        }
    }

    #[test]
    fn boundary_support_matches(g in prop::collection::vec(circle(), 2..=6)) {
        let tol = Tolerance::default();
        let set = GeneratorSet::new(g).unwrap();
        let Ok(b) = hull_boundary(&set, &tol) else { return Ok(()); };
        prop_assert!(b.closure_error() <= tol.eps_geom, "closure {}", b.closure_error());
        prop_assert!((b.total_turning() - TAU).abs() < 1e-9);
        prop_assert!(b.area() > 0.0);
        for i in 0..3600 {
            let th = TAU * i as f64 / 3600.0;
            prop_assert!((b.support(th) - support(&set, th)).abs() < 1e-9);
        }
    }
}

//! Shared inputs for the criterion benchmarks in `benches/`.

use carousel_core::carousel::random_instance;
use carousel_core::{CarouselInstance, Circle2, GeneratorSet, Point2, RngConfig};

/// Target and five generators in general position.
pub fn containment_query() -> (Circle2, GeneratorSet) {
    let gens = GeneratorSet::new(vec![
        Circle2::new(Point2::new(0.0, 0.0), 1.0),
        Circle2::new(Point2::new(8.0, 0.5), 0.5),
        Circle2::new(Point2::new(3.0, 7.0), 2.0),
        Circle2::point(Point2::new(-2.0, 5.0)),
        Circle2::new(Point2::new(6.0, 6.0), 0.25),
    ])
    .expect("finite generators");
    (Circle2::new(Point2::new(3.0, 3.0), 2.5), gens)
}

/// Deterministic batch of valid planar instances.
pub fn instances(n: usize) -> Vec<CarouselInstance> {
    (0..n as u64)
        .map(|s| random_instance(s, &RngConfig::default()).expect("generator succeeds").0)
        .collect()
}

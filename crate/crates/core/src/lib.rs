//! Disks in triangles, hulls of disks, and the carousel property.
//!
//! The planar engine decides `target ⊆ conv(generators)` exactly through the
//! support function of the hull; the 3D module searches the direction sphere
//! for a refuting direction.

pub mod carousel;
pub mod geom;
pub mod hull;
pub mod oracle;
pub mod sphere3;

pub use carousel::{
    scaled_instance, two_carousel_points, witness_search, xi_sweep_fixed, CarouselError, CarouselInstance,
    CorollaryInstance, RngConfig, Tangency, Witness, XiSweepReport,
};
pub use geom::{AffineSimilarity, Circle2, GeomError, Homothety, Point2, Tolerance};
pub use hull::{circle_in_hull, min_slack, ContainmentResult, GeneratorSet, HullError};
pub use sphere3::{Point3, SearchConfig, Sphere3, Sphere3Error};

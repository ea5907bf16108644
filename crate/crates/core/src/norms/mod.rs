//! Norms on `R²` and the integral classes of the torus they measure.

mod analysis;
mod class;
mod enumerate;
mod spec;

pub use analysis::{
    circle_directions, compact_convergence_check, disk_grid, lipschitz_bound, strict_convexity_check,
    ConvergenceReport, ConvexityReport,
};
pub use class::{canonical_classes_in_box, IntegralClass};
pub use enumerate::{enumerate_classes, enumerate_classes_with, pinned_classes, ClassEnumeration, ClassLength};
pub(crate) use spec::arc_polygon_max_radius;
pub use spec::{eval_norm, FnNorm, NormShape, NormSpec, PlanarNorm};

//! Exact combinatorics of convex lattice polygons: Pick counts, minimal
//! areas `A(k)`, minimal interior counts and the centrally symmetric minima
//! behind `f(m)`.

mod min_area;
mod polygon;
mod symmetric;

pub use min_area::{
    default_edge_bound, i_of_k, interior_from, min_area_convex_kgon, min_area_table, rabinowitz_lower_bound_holds,
    MinAreaResult, DEFAULT_BUDGET, MAX_K,
};
pub use polygon::{convex_hull, pick_counts, pick_counts_checked, scan_counts, LatticePolygon, PickCounts, Point};
pub use symmetric::{f_of_m, min_interior_symmetric, SymmetricResult, SymmetricWitness, MAX_TWO_M};

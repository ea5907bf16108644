//! Geodesic graphs of finitely many closed geodesics on the flat torus.

mod cycles;
mod epsilon;
mod graph;

pub use cycles::{coefficient_length, Cycle, MinimalCycle, Sublattice};
pub use epsilon::{
    compute_zeta_epsilon_theta, edge_bound, verify_strict_inequality, zeta, CycleGap, EpsilonOptions, EpsilonReport,
    GapReport, DEFAULT_NODE_BUDGET,
};
pub use graph::{build_graph, build_graph_for_norm, GraphClass, GraphEdge, RationalPoint, ToralGeodesicGraph};
pub(crate) use cycles::Dist;
pub(crate) use graph::to_scalar;

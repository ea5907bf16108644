//! Periodic weighted graphs as discrete toral metrics: shortest closed walks
//! in prescribed classes, stable norm estimates and length spectra.

mod graph;
mod pipeline;
mod search;

pub use graph::{build_canyon_graph, uniform_grid, NodeKind, PeriodicEdge, PeriodicWeightedGraph};
pub use pipeline::{
    canyon_for_norm, convergence_study, stable_norm_sample, CanyonSetup, ConvergenceStudy, HullGauge, StableNormSample,
};
pub use search::{spectrum, stable_norm_estimate, Spectrum, SpectrumEntry, StableNormEstimate};

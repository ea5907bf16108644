//! Toral metrics with prescribed stable norms, computed.
//!
//! The crate builds geodesic graphs on the flat torus from a list of
//! integral classes, measures shortest cycles in prescribed homology classes
//! on periodic weighted graphs, and computes the exact lattice-polygon
//! quantities that bound multiplicities in minimum length spectra.
//!
//! Length-valued code is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix `f64` (or `f32`) for the common cases. Lattice polygon
//! combinatorics and graph geometry are exact.

pub mod error;
pub mod lattice_polygons;
pub mod multiplicity;
pub mod norms;
pub mod periodic_metric;
pub mod scalar;
pub mod toral_graph;

mod rational;

pub use error::{Error, Result};
pub use norms::IntegralClass;
pub use rational::{format_ratio, parse_ratio};
pub use scalar::Scalar;

pub type NormSpec64 = norms::NormSpec<f64>;
pub type NormSpec32 = norms::NormSpec<f32>;
pub type ToralGeodesicGraph64 = toral_graph::ToralGeodesicGraph<f64>;
pub type ToralGeodesicGraph32 = toral_graph::ToralGeodesicGraph<f32>;
pub type PeriodicWeightedGraph64 = periodic_metric::PeriodicWeightedGraph<f64>;
pub type PeriodicWeightedGraph32 = periodic_metric::PeriodicWeightedGraph<f32>;
pub type SpectrumEntry64 = periodic_metric::SpectrumEntry<f64>;
pub type MultiplicityProfile64 = multiplicity::MultiplicityProfile<f64>;

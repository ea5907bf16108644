//! Floating point scalars used for lengths and norm values.
//!
//! Everything that measures a length is generic over [`Scalar`]; exact
//! combinatorics (lattice polygons, graph fractions) use integers and
//! [`num_rational::Rational64`] instead.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Relative tolerance under which two analytic lengths are considered tied.
    const TIE_REL_TOL: f64;
    /// Absolute slack allowed when comparing sums of edge lengths.
    const LENGTH_SLACK: f64;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal out of range")
    }

    fn from_i64_lossy(x: i64) -> Self {
        Self::from_i64(x).expect("integer out of range")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const TIE_REL_TOL: f64 = 1e-9;
    const LENGTH_SLACK: f64 = 1e-12;
}

impl Scalar for f32 {
    const TIE_REL_TOL: f64 = 1e-4;
    const LENGTH_SLACK: f64 = 1e-5;
}

/// `true` when `a` and `b` agree to within `rel` relative tolerance
/// (absolute near zero).
pub fn approx_eq<S: Scalar>(a: S, b: S, rel: f64) -> bool {
    let scale = a.abs().max(b.abs()).max(S::one());
    (a - b).abs() <= S::lit(rel) * scale
}

pub(crate) fn norm2<S: Scalar>(v: [S; 2]) -> S {
    v[0].hypot(v[1])
}

pub(crate) fn dot<S: Scalar>(u: [S; 2], v: [S; 2]) -> S {
    u[0] * v[0] + u[1] * v[1]
}

pub(crate) fn cross<S: Scalar>(u: [S; 2], v: [S; 2]) -> S {
    u[0] * v[1] - u[1] * v[0]
}

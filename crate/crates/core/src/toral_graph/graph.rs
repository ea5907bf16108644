use std::collections::BTreeSet;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::norms::IntegralClass;
use crate::scalar::Scalar;

pub type RationalPoint = [Rational64; 2];

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct GraphClass<S> {
    pub class: IntegralClass,
    pub length: S,
}

/// A segment of the closed geodesic of one class between consecutive
/// intersection points, oriented along the class.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct GraphEdge<S> {
    pub tail: usize,
    pub head: usize,
    pub class: usize,
    /// Fraction of the closed geodesic covered by this edge.
    #[serde(serialize_with = "crate::rational::serde_ratio::serialize")]
    pub q: Rational64,
    /// Displacement of a lift, `q·(a, b)`.
    #[serde(serialize_with = "crate::rational::serde_ratio_pair::serialize")]
    pub displacement: RationalPoint,
    /// Integer translation taking the head's representative in `[0,1)²` to
    /// the end of the lift starting at the tail's representative.
    pub crossing: [i64; 2],
    pub length: S,
}

/// The union of the closed geodesics through the origin of the flat torus
/// `R²/Z²` in a list of primitive classes, as a metric graph whose vertices
/// are the intersection points.
#[derive(Clone, Debug, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct ToralGeodesicGraph<S> {
    /// Exact coordinates in `[0,1)²`, sorted lexicographically; vertex 0 is
    /// the origin.
    #[serde(serialize_with = "serialize_points")]
    pub vertices: Vec<RationalPoint>,
    pub edges: Vec<GraphEdge<S>>,
    pub classes: Vec<GraphClass<S>>,
    /// Common denominator of all vertex coordinates and displacements.
    #[serde(skip)]
    pub(crate) denom: i64,
}

fn serialize_points<Ser: serde::Serializer>(pts: &[RationalPoint], s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(pts.len()))?;
    for p in pts {
        seq.serialize_element(&[crate::format_ratio(&p[0]), crate::format_ratio(&p[1])])?;
    }
    seq.end()
}

pub(crate) fn frac(r: Rational64) -> Rational64 {
    r - r.floor()
}

pub(crate) fn to_scalar<S: Scalar>(r: Rational64) -> S {
    S::from_i64_lossy(*r.numer()) / S::from_i64_lossy(*r.denom())
}

/// Builds the geodesic graph of the given primitive, pairwise non-parallel
/// classes with prescribed lengths.
pub fn build_graph<S: Scalar>(classes: &[(IntegralClass, S)]) -> Result<ToralGeodesicGraph<S>> {
    if classes.is_empty() {
        return invalid("at least one class is required");
    }
    for (i, (h, l)) in classes.iter().enumerate() {
        if !h.is_primitive() {
            return invalid(format!("class {h} is not primitive"));
        }
        if !(*l > S::zero() && l.is_finite()) {
            return invalid(format!("length of class {h} must be positive, got {l}"));
        }
        for (g, _) in &classes[..i] {
            if g.det(h) == 0 {
                return invalid(format!("classes {g} and {h} are parallel"));
            }
        }
    }
    // parameters along each geodesic t ↦ t·h_i (mod Z²) at which it meets
    // another geodesic: t ∈ (1/|det|)·Z
    let params: Vec<Vec<Rational64>> = classes
        .iter()
        .map(|(h, _)| {
            let mut ts = BTreeSet::new();
            ts.insert(Rational64::zero());
            for (g, _) in classes {
                let d = h.det(g).abs();
                for r in 1..d {
                    ts.insert(Rational64::new(r, d));
                }
            }
            ts.into_iter().collect()
        })
        .collect();
    let point = |h: &IntegralClass, t: Rational64| -> RationalPoint {
        [frac(t * Rational64::from_integer(h.a)), frac(t * Rational64::from_integer(h.b))]
    };
    let mut vertex_set = BTreeSet::new();
    for ((h, _), ts) in classes.iter().zip(&params) {
        for t in ts {
            vertex_set.insert(point(h, *t));
        }
    }
    let vertices: Vec<RationalPoint> = vertex_set.into_iter().collect();
    let index = |p: &RationalPoint| vertices.binary_search(p).expect("vertex is registered");
    let mut edges = Vec::new();
    for (ci, ((h, len), ts)) in classes.iter().zip(&params).enumerate() {
        for (s, t) in ts.iter().enumerate() {
            let next = ts.get(s + 1).copied().unwrap_or_else(Rational64::one);
            let q = next - t;
            let tail_pt = point(h, *t);
            let head_pt = point(h, next);
            let displacement = [q * Rational64::from_integer(h.a), q * Rational64::from_integer(h.b)];
            let end = [tail_pt[0] + displacement[0], tail_pt[1] + displacement[1]];
            let crossing = [end[0] - head_pt[0], end[1] - head_pt[1]];
            if !crossing[0].is_integer() || !crossing[1].is_integer() {
                return Err(Error::CheckFailed(format!("edge of class {h} does not end at a vertex")));
            }
            edges.push(GraphEdge {
                tail: index(&tail_pt),
                head: index(&head_pt),
                class: ci,
                q,
                displacement,
                crossing: [crossing[0].to_integer(), crossing[1].to_integer()],
                length: to_scalar::<S>(q) * *len,
            });
        }
    }
    let denom = vertices
        .iter()
        .flat_map(|p| p.iter())
        .chain(edges.iter().flat_map(|e| e.displacement.iter()))
        .fold(1i64, |acc, r| acc.lcm(r.denom()));
    Ok(ToralGeodesicGraph {
        vertices,
        edges,
        classes: classes
            .iter()
            .map(|(class, length)| GraphClass {
                class: *class,
                length: *length,
            })
            .collect(),
        denom,
    })
}

/// Graph on the first `k` prescribed classes of `norm` (the trivial class
/// counts as the first and contributes no geodesic), with `ℓ_i = ‖h_i‖`.
/// Returns the graph and `ℓ_k`.
pub fn build_graph_for_norm<S: Scalar>(norm: &crate::norms::NormSpec<S>, k: usize) -> Result<(ToralGeodesicGraph<S>, S)> {
    if k < 2 {
        return invalid("k must be at least 2 so that some geodesic is present");
    }
    let pinned = crate::norms::pinned_classes(norm, k)?;
    let classes: Vec<(IntegralClass, S)> = pinned
        .iter()
        .filter(|c| !c.class.is_trivial())
        .map(|c| (c.class, c.length))
        .collect();
    let lk = pinned.last().unwrap().length;
    Ok((build_graph(&classes)?, lk))
}

impl<S: Scalar> ToralGeodesicGraph<S> {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges_of_class(&self, i: usize) -> impl Iterator<Item = &GraphEdge<S>> {
        self.edges.iter().filter(move |e| e.class == i)
    }

    /// Oriented edges leaving each vertex, as indices `2e` (forward) and
    /// `2e + 1` (reversed).
    pub(crate) fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.tail].push(2 * i);
            adj[e.head].push(2 * i + 1);
        }
        adj
    }

    /// Largest ratio `|displacement|_∞ / length` over edges.
    pub fn slope_bound(&self) -> S {
        self.edges
            .iter()
            .map(|e| to_scalar::<S>(num_traits::Signed::abs(&e.displacement[0]).max(num_traits::Signed::abs(&e.displacement[1]))) / e.length)
            .fold(S::zero(), S::max)
    }

    /// Checks the structural invariants: fractions of each class sum to 1,
    /// displacements sum to the class, all fractions positive, and every
    /// geodesic passes through the origin.
    pub fn check_invariants(&self) -> Result<()> {
        for (i, c) in self.classes.iter().enumerate() {
            let mut q_sum = Rational64::zero();
            let mut d_sum = [Rational64::zero(), Rational64::zero()];
            let mut through_origin = false;
            for e in self.edges_of_class(i) {
                if e.q <= Rational64::zero() {
                    return Err(Error::CheckFailed(format!("non-positive fraction on class {}", c.class)));
                }
                q_sum += e.q;
                d_sum[0] += e.displacement[0];
                d_sum[1] += e.displacement[1];
                through_origin |= e.tail == 0;
            }
            if q_sum != Rational64::one() {
                return Err(Error::CheckFailed(format!("fractions of class {} sum to {q_sum}", c.class)));
            }
            if d_sum != [Rational64::from_integer(c.class.a), Rational64::from_integer(c.class.b)] {
                return Err(Error::CheckFailed(format!("displacements of class {} do not sum to it", c.class)));
            }
            if !through_origin {
                return Err(Error::CheckFailed(format!("geodesic of class {} misses the origin", c.class)));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cls(v: &[([i64; 2], f64)]) -> Vec<(IntegralClass, f64)> {
        v.iter().map(|(h, l)| (IntegralClass::from(*h), *l)).collect()
    }

    #[test]
    fn generators_meet_once() {
        let g = build_graph(&cls(&[([1, 0], 1.0), ([0, 1], 1.0)])).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edges.len(), 2);
        assert!(g.edges.iter().all(|e| e.q == Rational64::one() && e.tail == 0 && e.head == 0));
        assert_eq!(g.edges[0].crossing, [1, 0]);
        g.check_invariants().unwrap();
    }

    #[test]
    fn unimodular_triple() {
        let g = build_graph(&cls(&[([1, 0], 1.0), ([0, 1], 1.0), ([1, 1], 2f64.sqrt())])).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edges.len(), 3);
    }

    #[test]
    fn determinant_three() {
        let l = 5f64.sqrt();
        let g = build_graph(&cls(&[([1, 2], l), ([2, 1], l)])).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edges.len(), 6);
        assert!(g.edges.iter().all(|e| e.q == Rational64::new(1, 3)));
        g.check_invariants().unwrap();
        // vertices are the multiples of (1/3, 2/3)
        let third = Rational64::new(1, 3);
        assert_eq!(g.vertices[1], [third, third * 2]);
        assert_eq!(g.vertices[2], [third * 2, third]);
    }

    #[test]
    fn rejects_bad_classes() {
        assert!(build_graph(&cls(&[([2, 0], 1.0)])).is_err());
        assert!(build_graph(&cls(&[([1, 1], 1.0), ([-1, -1], 1.0)])).is_err());
        assert!(build_graph(&cls(&[([1, 1], 0.0)])).is_err());
        assert!(build_graph::<f64>(&[]).is_err());
    }
}

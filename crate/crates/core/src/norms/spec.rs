use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::scalar::{cross, dot, norm2, Scalar};

/// A norm on `R²` that can be evaluated pointwise.
pub trait PlanarNorm<S: Scalar>: Sync {
    fn norm(&self, v: [S; 2]) -> S;
}

/// Wraps a closure as a [`PlanarNorm`].
pub struct FnNorm<F>(pub F);

impl<S: Scalar, F: Fn([S; 2]) -> S + Sync> PlanarNorm<S> for FnNorm<F> {
    fn norm(&self, v: [S; 2]) -> S {
        (self.0)(v)
    }
}

/// A strictly convex (or, for straight-edged polygons, merely convex) norm
/// described by a closed-form unit ball.
///
/// JSON form: `{"variant": "ellipse", "q": [[..],[..]], "scale": 1.0}`,
/// `{"variant": "pnorm", "p": 4.0, "scale": 1.0}` or
/// `{"variant": "arcpolygon", "vertices": [[1,0],...], "radius": 12.5, "level": 1.0, "scale": 1.0}`
/// (`"radius": null` means straight edges).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct NormSpec<S> {
    #[serde(flatten)]
    pub shape: NormShape<S>,
    #[serde(default = "num_traits::One::one")]
    pub scale: S,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase", bound = "S: Scalar")]
pub enum NormShape<S> {
    /// `‖v‖ = sqrt(vᵀ Q v)` for a symmetric positive definite `Q`.
    Ellipse { q: [[S; 2]; 2] },
    /// `‖v‖ = (|x|^p + |y|^p)^(1/p)`, `1 < p < ∞`.
    PNorm { p: S },
    /// Gauge of a centrally symmetric lattice polygon whose edges are
    /// replaced by outward circular arcs of a common `radius`. Vertices are
    /// listed counter-clockwise and sit at norm value `level`.
    ArcPolygon {
        vertices: Vec<[i64; 2]>,
        radius: Option<S>,
        level: S,
    },
}

impl<S: Scalar> NormSpec<S> {
    pub fn ellipse(q: [[S; 2]; 2]) -> Result<Self> {
        let n = Self {
            shape: NormShape::Ellipse { q },
            scale: S::one(),
        };
        n.validate()?;
        Ok(n)
    }

    pub fn euclidean() -> Self {
        Self {
            shape: NormShape::Ellipse {
                q: [[S::one(), S::zero()], [S::zero(), S::one()]],
            },
            scale: S::one(),
        }
    }

    /// Gram matrix of the hexagonal lattice; the classes `(1,0)`, `(0,1)` and
    /// `(1,-1)` all have norm 1.
    pub fn hexagonal() -> Self {
        let half = S::lit(0.5);
        Self {
            shape: NormShape::Ellipse {
                q: [[S::one(), half], [half, S::one()]],
            },
            scale: S::one(),
        }
    }

    pub fn pnorm(p: S) -> Result<Self> {
        let n = Self {
            shape: NormShape::PNorm { p },
            scale: S::one(),
        };
        n.validate()?;
        Ok(n)
    }

    pub fn arc_polygon(vertices: Vec<[i64; 2]>, radius: Option<S>, level: S) -> Result<Self> {
        let n = Self {
            shape: NormShape::ArcPolygon {
                vertices,
                radius,
                level,
            },
            scale: S::one(),
        };
        n.validate()?;
        Ok(n)
    }

    pub fn with_scale(mut self, scale: S) -> Result<Self> {
        self.scale = scale;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scale > S::zero() && self.scale.is_finite()) {
            return invalid(format!("scale must be positive and finite, got {}", self.scale));
        }
        match &self.shape {
            NormShape::Ellipse { q } => {
                let [[a, b], [c, d]] = *q;
                if ![a, b, c, d].iter().all(|x| x.is_finite()) {
                    return invalid("ellipse matrix has non-finite entries");
                }
                if (b - c).abs() > S::lit(S::LENGTH_SLACK) * (b.abs() + c.abs() + S::one()) {
                    return invalid("ellipse matrix is not symmetric");
                }
                if !(a > S::zero() && a * d - b * c > S::zero()) {
                    return invalid("ellipse matrix is not positive definite");
                }
                Ok(())
            }
            NormShape::PNorm { p } => {
                if !(*p > S::one() && p.is_finite()) {
                    return invalid(format!("p-norm requires 1 < p < ∞, got {p}"));
                }
                Ok(())
            }
            NormShape::ArcPolygon {
                vertices,
                radius,
                level,
            } => validate_arc_polygon(vertices, *radius, *level),
        }
    }

    /// Evaluates the norm. Assumes the norm has been validated.
    pub fn eval(&self, v: [S; 2]) -> S {
        let raw = match &self.shape {
            NormShape::Ellipse { q } => {
                let [[a, b], [c, d]] = *q;
                let s = a * v[0] * v[0] + (b + c) * v[0] * v[1] + d * v[1] * v[1];
                s.max(S::zero()).sqrt()
            }
            NormShape::PNorm { p } => {
                let (x, y) = (v[0].abs(), v[1].abs());
                let m = x.max(y);
                if m == S::zero() {
                    S::zero()
                } else {
                    m * ((x / m).powf(*p) + (y / m).powf(*p)).powf(p.recip())
                }
            }
            NormShape::ArcPolygon {
                vertices,
                radius,
                level,
            } => *level * arc_polygon_gauge(vertices, *radius, v),
        };
        raw * self.scale
    }

    /// A certified lower bound for `‖x‖ / |x|` over `x ≠ 0`.
    pub fn euclidean_lower_bound(&self) -> S {
        let safety = S::one() - S::lit(1e-9);
        let raw = match &self.shape {
            NormShape::Ellipse { q } => {
                let [[a, b], [c, d]] = *q;
                let off = (b + c) / S::lit(2.0);
                let tr = a + d;
                let disc = ((a - d) * (a - d) + S::lit(4.0) * off * off).sqrt();
                ((tr - disc) / S::lit(2.0)).max(S::zero()).sqrt()
            }
            NormShape::PNorm { p } => {
                if *p >= S::lit(2.0) {
                    S::lit(2.0).powf(p.recip() - S::lit(0.5))
                } else {
                    S::one()
                }
            }
            NormShape::ArcPolygon {
                vertices,
                radius,
                level,
            } => *level / arc_polygon_max_radius(vertices, *radius),
        };
        raw * self.scale * safety
    }

    /// Name used in reports and file names.
    pub fn kind(&self) -> &'static str {
        match self.shape {
            NormShape::Ellipse { .. } => "ellipse",
            NormShape::PNorm { .. } => "pnorm",
            NormShape::ArcPolygon { .. } => "arcpolygon",
        }
    }
}

impl<S: Scalar> PlanarNorm<S> for NormSpec<S> {
    fn norm(&self, v: [S; 2]) -> S {
        self.eval(v)
    }
}

/// Validating evaluation entry point.
pub fn eval_norm<S: Scalar>(norm: &NormSpec<S>, v: [S; 2]) -> Result<S> {
    norm.validate()?;
    Ok(norm.eval(v))
}

fn to_s<S: Scalar>(p: [i64; 2]) -> [S; 2] {
    [S::from_i64_lossy(p[0]), S::from_i64_lossy(p[1])]
}

fn cross_i(u: [i64; 2], v: [i64; 2]) -> i64 {
    u[0] * v[1] - u[1] * v[0]
}

/// Geometry of the outward arc over the chord `a → b`.
struct Arc<S> {
    center: [S; 2],
    mid_sq: S,
    two_d_mn: S,
    half_sq: S,
}

fn arc_over<S: Scalar>(a: [S; 2], b: [S; 2], r: S) -> Arc<S> {
    let chord = [b[0] - a[0], b[1] - a[1]];
    let len = norm2(chord);
    let half = len / S::lit(2.0);
    // outward normal for a counter-clockwise boundary
    let normal = [chord[1] / len, -chord[0] / len];
    let mid = [(a[0] + b[0]) / S::lit(2.0), (a[1] + b[1]) / S::lit(2.0)];
    let d = (r * r - half * half).max(S::zero()).sqrt();
    Arc {
        center: [mid[0] - d * normal[0], mid[1] - d * normal[1]],
        mid_sq: dot(mid, mid),
        two_d_mn: S::lit(2.0) * d * dot(mid, normal),
        half_sq: half * half,
    }
}

/// Gauge (Minkowski functional) of the bulged polygon, i.e. the norm with
/// vertices at level 1.
pub(crate) fn arc_polygon_gauge<S: Scalar>(vertices: &[[i64; 2]], radius: Option<S>, v: [S; 2]) -> S {
    let len = norm2(v);
    if len == S::zero() {
        return S::zero();
    }
    let n = vertices.len();
    for i in 0..n {
        let a = to_s::<S>(vertices[i]);
        let b = to_s::<S>(vertices[(i + 1) % n]);
        let ca = cross(a, v);
        if ca == S::zero() && dot(a, v) > S::zero() {
            return len / norm2(a);
        }
        if ca >= S::zero() && cross(b, v) < S::zero() {
            return match radius {
                None => {
                    let normal = [b[1] - a[1], a[0] - b[0]];
                    dot(normal, v) / dot(normal, a)
                }
                Some(r) => {
                    let arc = arc_over(a, b, r);
                    let u = [v[0] / len, v[1] / len];
                    let uc = dot(u, arc.center);
                    // |C|² − R² expanded to avoid cancellation for large R
                    let c_sq_minus_r_sq = arc.mid_sq - arc.two_d_mn - arc.half_sq;
                    let t = uc + (uc * uc - c_sq_minus_r_sq).max(S::zero()).sqrt();
                    len / t
                }
            };
        }
    }
    // Unreachable for a validated polygon containing the origin.
    S::infinity()
}

pub(crate) fn arc_polygon_max_radius<S: Scalar>(vertices: &[[i64; 2]], radius: Option<S>) -> S {
    let n = vertices.len();
    let mut best = S::zero();
    for i in 0..n {
        let a = to_s::<S>(vertices[i]);
        best = best.max(norm2(a));
        if let Some(r) = radius {
            let b = to_s::<S>(vertices[(i + 1) % n]);
            let arc = arc_over(a, b, r);
            best = best.max(norm2(arc.center) + r);
        }
    }
    best
}

/// Half central angle of the arc of radius `r` over an edge of length `len`.
pub(crate) fn arc_half_angle<S: Scalar>(len: S, r: S) -> S {
    (len / (S::lit(2.0) * r)).min(S::one()).asin()
}

/// Remaining turning angle at each vertex once adjacent edges are bulged.
pub(crate) fn arc_corner_turns<S: Scalar>(vertices: &[[i64; 2]], radius: Option<S>) -> Vec<S> {
    let n = vertices.len();
    let edge = |i: usize| {
        let a = vertices[i % n];
        let b = vertices[(i + 1) % n];
        [b[0] - a[0], b[1] - a[1]]
    };
    (0..n)
        .map(|i| {
            let e_in = to_s::<S>(edge(i + n - 1));
            let e_out = to_s::<S>(edge(i));
            let tau = cross(e_in, e_out).atan2(dot(e_in, e_out));
            match radius {
                None => tau,
                Some(r) => tau - arc_half_angle(norm2(e_in), r) - arc_half_angle(norm2(e_out), r),
            }
        })
        .collect()
}

fn validate_arc_polygon<S: Scalar>(vertices: &[[i64; 2]], radius: Option<S>, level: S) -> Result<()> {
    let n = vertices.len();
    if n < 4 || n % 2 != 0 {
        return invalid(format!("arc polygon needs an even number ≥ 4 of vertices, got {n}"));
    }
    if !(level > S::zero() && level.is_finite()) {
        return invalid("arc polygon level must be positive");
    }
    let m = n / 2;
    for i in 0..m {
        let (p, q) = (vertices[i], vertices[i + m]);
        if p[0] != -q[0] || p[1] != -q[1] {
            return invalid("arc polygon vertices are not centrally symmetric about the origin");
        }
    }
    let mut half_changes = 0;
    let half = |e: [i64; 2]| (e[1] > 0 || (e[1] == 0 && e[0] > 0)) as u8;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        let c = vertices[(i + 2) % n];
        let e1 = [b[0] - a[0], b[1] - a[1]];
        let e2 = [c[0] - b[0], c[1] - b[1]];
        if cross_i(e1, e2) <= 0 {
            return invalid("arc polygon vertices are not in strictly convex counter-clockwise position");
        }
        if half(e1) != half(e2) {
            half_changes += 1;
        }
    }
    if half_changes != 2 {
        return invalid("arc polygon boundary winds more than once");
    }
    if let Some(r) = radius {
        if !(r > S::zero() && r.is_finite()) {
            return invalid("arc radius must be positive and finite (use null for straight edges)");
        }
        for i in 0..n {
            let a = to_s::<S>(vertices[i]);
            let b = to_s::<S>(vertices[(i + 1) % n]);
            let len = norm2([b[0] - a[0], b[1] - a[1]]);
            if r <= len / S::lit(2.0) {
                return invalid(format!("arc radius {r} is below half an edge length"));
            }
        }
        if arc_corner_turns(vertices, radius).iter().any(|t| *t <= S::zero()) {
            return invalid(format!("arc radius {r} bulges the boundary into a non-convex curve"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond(radius: Option<f64>) -> NormSpec<f64> {
        NormSpec::arc_polygon(vec![[1, 0], [0, 1], [-1, 0], [0, -1]], radius, 1.0).unwrap()
    }

    #[test]
    fn closed_form_values() {
        let e = NormSpec::<f64>::euclidean();
        assert_eq!(eval_norm(&e, [3.0, 4.0]).unwrap(), 5.0);
        let p4 = NormSpec::<f64>::pnorm(4.0).unwrap();
        assert!((p4.eval([1.0, 1.0]) - 2f64.powf(0.25)).abs() < 1e-12);
        assert!((p4.eval([1.0, 1.0]) - 1.189_207_12).abs() < 1e-8);
    }

    #[test]
    fn arc_polygon_vertex_is_on_level() {
        for r in [None, Some(1.5), Some(5.0), Some(1e6)] {
            assert_eq!(diamond(r).eval([1.0, 0.0]), 1.0);
            assert_eq!(diamond(r).eval([0.0, -2.0]), 2.0);
        }
    }

    #[test]
    fn straight_edges_give_l1() {
        let d = diamond(None);
        assert!((d.eval([0.5, 0.5]) - 1.0).abs() < 1e-15);
        assert!((d.eval([0.3, -0.2]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn bulged_edge_midpoint_is_inside_unit_level() {
        // the arc over the edge (1,0)-(0,1) peaks at distance |mid| + sagitta
        let r = 1.5;
        let d = diamond(Some(r));
        let half = 2f64.sqrt() / 2.0;
        let sagitta = r - (r * r - half * half).sqrt();
        let mid_dist = half + sagitta;
        let v = [1.0 / 2f64.sqrt(), 1.0 / 2f64.sqrt()];
        assert!((d.eval(v) - 1.0 / mid_dist).abs() < 1e-12);
    }

    #[test]
    fn validation_errors() {
        assert!(NormSpec::<f64>::ellipse([[1.0, 2.0], [2.0, 1.0]]).is_err());
        assert!(NormSpec::<f64>::ellipse([[1.0, 0.1], [0.2, 1.0]]).is_err());
        assert!(NormSpec::<f64>::pnorm(1.0).is_err());
        assert!(NormSpec::<f64>::pnorm(0.5).is_err());
        assert!(NormSpec::<f64>::euclidean().with_scale(-1.0).is_err());
        // not symmetric
        assert!(NormSpec::<f64>::arc_polygon(vec![[1, 0], [0, 1], [-1, 0], [0, -2]], None, 1.0).is_err());
        // clockwise
        assert!(NormSpec::<f64>::arc_polygon(vec![[1, 0], [0, -1], [-1, 0], [0, 1]], None, 1.0).is_err());
        // too much bulge: each corner turns by 90°, two half-angles of 45° use it all
        assert!(NormSpec::<f64>::arc_polygon(vec![[1, 0], [0, 1], [-1, 0], [0, -1]], Some(1.0), 1.0).is_err());
        assert!(NormSpec::<f64>::arc_polygon(vec![[1, 0], [0, 1], [-1, 0], [0, -1]], Some(0.5), 1.0).is_err());
    }

    #[test]
    fn json_shape() {
        let n = NormSpec::<f64>::pnorm(4.0).unwrap();
        let s = serde_json::to_string(&n).unwrap();
        assert_eq!(s, r#"{"variant":"pnorm","p":4.0,"scale":1.0}"#);
        let back: NormSpec<f64> = serde_json::from_str(r#"{"variant":"ellipse","q":[[2,0],[0,1]]}"#).unwrap();
        assert_eq!(back.scale, 1.0);
        let arc: NormSpec<f64> = serde_json::from_str(
            r#"{"variant":"arcpolygon","vertices":[[1,0],[0,1],[-1,0],[0,-1]],"radius":null,"level":1,"scale":2}"#,
        )
        .unwrap();
        assert_eq!(arc.eval([1.0, 0.0]), 2.0);
    }

    #[test]
    fn f32_evaluation() {
        let e = NormSpec::<f32>::hexagonal();
        assert!((e.eval([1.0, -1.0]) - 1.0).abs() < 1e-6);
    }
}

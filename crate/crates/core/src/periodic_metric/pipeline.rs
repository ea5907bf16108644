use rayon::prelude::*;
use serde::Serialize;

use super::graph::{build_canyon_graph, PeriodicWeightedGraph};
use super::search::{stable_norm_estimate, StableNormEstimate};
use crate::error::{invalid, Result};
use crate::norms::{
    canonical_classes_in_box, circle_directions, compact_convergence_check, disk_grid, pinned_classes, IntegralClass,
    NormSpec, PlanarNorm,
};
use crate::scalar::Scalar;
use crate::toral_graph::{build_graph_for_norm, compute_zeta_epsilon_theta, EpsilonOptions, EpsilonReport, ToralGeodesicGraph};

/// Everything built on the way from a norm and `k` to a canyon graph.
#[derive(Clone, Debug, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct CanyonSetup<S> {
    pub k: usize,
    pub lk: S,
    pub background: S,
    pub resolution: usize,
    pub graph: ToralGeodesicGraph<S>,
    pub epsilon: EpsilonReport<S>,
    #[serde(skip)]
    pub canyon: PeriodicWeightedGraph<S>,
}

/// Builds the geodesic graph of the first `k` prescribed classes of `norm`,
/// computes `Θ` and the canyon graph at resolution `n` with background
/// systole `background` (default `ℓ_k`).
pub fn canyon_for_norm<S: Scalar>(
    norm: &NormSpec<S>,
    k: usize,
    n: usize,
    background: Option<S>,
    options: EpsilonOptions<S>,
) -> Result<CanyonSetup<S>> {
    let (graph, lk) = build_graph_for_norm(norm, k)?;
    let epsilon = compute_zeta_epsilon_theta(&graph, norm, lk, options)?;
    let background = background.unwrap_or(lk);
    let canyon = build_canyon_graph(&graph, epsilon.theta, background, n, lk)?;
    Ok(CanyonSetup {
        k,
        lk,
        background,
        resolution: n,
        graph,
        epsilon,
        canyon,
    })
}

/// Gauge of the convex hull of finitely many points symmetric about the
/// origin: the largest norm whose unit ball contains them all.
#[derive(Clone, Debug, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct HullGauge<S> {
    /// Hull vertices, counter-clockwise.
    pub vertices: Vec<[S; 2]>,
}

impl<S: Scalar> HullGauge<S> {
    /// Hull of `±p` for the given points.
    pub fn new(points: &[[S; 2]]) -> Result<Self> {
        let mut pts: Vec<[S; 2]> = points.iter().flat_map(|p| [*p, [S::zero() - p[0], S::zero() - p[1]]]).collect();
        if pts.iter().any(|p| !(p[0].is_finite() && p[1].is_finite())) {
            return invalid("hull points must be finite");
        }
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        let cross = |o: [S; 2], a: [S; 2], b: [S; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
        let mut hull: Vec<[S; 2]> = Vec::new();
        for pass in 0..2 {
            let base = hull.len();
            let iter: Box<dyn Iterator<Item = &[S; 2]>> = if pass == 0 {
                Box::new(pts.iter())
            } else {
                Box::new(pts.iter().rev())
            };
            for p in iter {
                while hull.len() >= base + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], *p) <= S::zero() {
                    hull.pop();
                }
                hull.push(*p);
            }
            hull.pop();
        }
        if hull.len() < 4 {
            return invalid("points do not span the plane");
        }
        Ok(Self { vertices: hull })
    }
}

impl<S: Scalar> PlanarNorm<S> for HullGauge<S> {
    fn norm(&self, v: [S; 2]) -> S {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let a = self.vertices[i];
                let b = self.vertices[(i + 1) % n];
                let normal = [b[1] - a[1], a[0] - b[0]];
                (normal[0] * v[0] + normal[1] * v[1]) / (normal[0] * a[0] + normal[1] * a[1])
            })
            .fold(S::zero(), S::max)
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct StableNormSample<S> {
    pub estimates: Vec<StableNormEstimate<S>>,
    pub gauge: HullGauge<S>,
}

/// Stable norm estimates for the primitive classes with `|h|_∞ ≤ radius`
/// and the gauge of the hull of `±h/estimate(h)`.
pub fn stable_norm_sample<S: Scalar>(
    pg: &PeriodicWeightedGraph<S>,
    radius: i64,
    n_max: usize,
) -> Result<StableNormSample<S>> {
    if radius < 1 {
        return invalid("radius must be at least 1");
    }
    let classes: Vec<IntegralClass> = canonical_classes_in_box(radius)
        .into_iter()
        .filter(|h| h.is_primitive())
        .collect();
    let estimates: Vec<StableNormEstimate<S>> = classes
        .par_iter()
        .map(|h| stable_norm_estimate(pg, *h, n_max))
        .collect::<Result<_>>()?;
    let points: Vec<[S; 2]> = estimates
        .iter()
        .map(|e| {
            let v = e.class.to_vector::<S>();
            [v[0] / e.estimate, v[1] / e.estimate]
        })
        .collect();
    Ok(StableNormSample {
        estimates,
        gauge: HullGauge::new(&points)?,
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct ConvergenceStudy<S> {
    pub ks: Vec<usize>,
    /// Background systole shared by all canyons, `ℓ_{k_max}`.
    pub background: S,
    /// Sup deviation of each estimate from the norm at the unit vectors of
    /// the classes pinned at `k_max`.
    pub pinned_deviation: Vec<S>,
    pub pinned_nonincreasing: bool,
    /// Sup deviation over equally spaced unit directions.
    pub circle_deviation: Vec<S>,
    pub directions: usize,
    pub lipschitz_constant: S,
    /// First `k` from which every estimate agrees with the norm at `e1`, `e2`.
    pub lipschitz_from_k: Option<usize>,
    pub lipschitz_pairs: usize,
    pub estimates: Vec<StableNormSample<S>>,
}

/// Stable norm estimates of the canyon graphs for `k = 2, …, k_max`, all
/// with background `ℓ_{k_max}`, compared with `norm`. A Lipschitz violation
/// is returned as an error.
pub fn convergence_study<S: Scalar>(
    norm: &NormSpec<S>,
    k_max: usize,
    n: usize,
    radius: i64,
    n_max: usize,
    directions: usize,
    options: EpsilonOptions<S>,
) -> Result<ConvergenceStudy<S>> {
    if k_max < 2 {
        return invalid("k_max must be at least 2");
    }
    if directions == 0 {
        return invalid("at least one direction is required");
    }
    let pinned = pinned_classes(norm, k_max)?;
    let background = pinned.last().unwrap().length;
    let unit: Vec<[S; 2]> = pinned
        .iter()
        .filter(|c| !c.class.is_trivial())
        .map(|c| {
            let v = c.class.to_vector::<S>();
            [v[0] / c.length, v[1] / c.length]
        })
        .collect();
    let ks: Vec<usize> = (2..=k_max).collect();
    let estimates: Vec<StableNormSample<S>> = ks
        .iter()
        .map(|k| {
            let setup = canyon_for_norm(norm, *k, n, Some(background), options)?;
            stable_norm_sample(&setup.canyon, radius, n_max)
        })
        .collect::<Result<_>>()?;
    let gauges: Vec<&dyn PlanarNorm<S>> = estimates.iter().map(|e| &e.gauge as &dyn PlanarNorm<S>).collect();
    let tol = S::lit(S::TIE_REL_TOL);
    let pinned_deviation = compact_convergence_check(&gauges, norm, &unit, tol)?.deviations;
    let circle_deviation = compact_convergence_check(&gauges, norm, &circle_directions(directions), tol)?.deviations;
    let lip = compact_convergence_check(&gauges, norm, &disk_grid(4, directions.min(64)), tol)?;
    let pinned_nonincreasing = pinned_deviation.windows(2).all(|w| w[1] <= w[0] + tol);
    Ok(ConvergenceStudy {
        lipschitz_from_k: lip.pinned_from.map(|j| ks[j]),
        ks,
        background,
        pinned_deviation,
        pinned_nonincreasing,
        circle_deviation,
        directions,
        lipschitz_constant: lip.lipschitz_constant,
        lipschitz_pairs: lip.pairs_checked,
        estimates,
    })
}

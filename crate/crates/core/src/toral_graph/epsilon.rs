use serde::Serialize;

use super::cycles::Cycle;
use super::graph::ToralGeodesicGraph;
use crate::error::{invalid, Error, Result};
use crate::norms::{IntegralClass, PlanarNorm};
use crate::scalar::Scalar;

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// A cycle of the enumeration together with its gap `L(c) − ‖h_c‖`.
#[derive(Clone, Debug, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct CycleGap<S> {
    pub cycle: Cycle,
    pub class: IntegralClass,
    pub length: S,
    pub norm: S,
    pub gap: S,
}

#[derive(Clone, Copy, Debug)]
pub struct EpsilonOptions<S> {
    pub node_budget: u64,
    /// Value of `Θ` when no admissible cycle exists; `None` means `ζ`.
    pub theta_cap: Option<S>,
}

impl<S> Default for EpsilonOptions<S> {
    fn default() -> Self {
        Self {
            node_budget: DEFAULT_NODE_BUDGET,
            theta_cap: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct EpsilonReport<S> {
    pub zeta: S,
    pub edge_bound: usize,
    /// `None` when no admissible cycle has at most `edge_bound` edges.
    pub epsilon: Option<S>,
    pub theta: S,
    pub theta_capped: bool,
    pub witness: Option<CycleGap<S>>,
    pub nodes: u64,
    /// Closed walks enumerated, each with displacement and intersection
    /// homology compared.
    pub closed_walks: u64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct GapReport<S> {
    pub edge_bound: usize,
    /// Distinct cycles up to rotation and reversal.
    pub cycles: usize,
    pub min_gap: Option<S>,
    /// Lower quartile, median and upper quartile of the gaps.
    pub quartiles: Option<[S; 3]>,
    pub max_gap: Option<S>,
    pub min_cycle: Option<CycleGap<S>>,
    pub nodes: u64,
    pub closed_walks: u64,
}

struct OrientedEdge<S> {
    tail: usize,
    head: usize,
    class: usize,
    forward: bool,
    disp: [i64; 2],
    inter: [i64; 2],
    length: S,
}

struct Walker<'a, S, N: ?Sized> {
    edges: Vec<OrientedEdge<S>>,
    out: Vec<Vec<usize>>,
    denom: i64,
    norm: &'a N,
    edge_bound: usize,
    budget: u64,
    nodes: u64,
    /// Closed walks whose two homology computations were compared.
    closed: u64,
    /// Prune partial walks whose gap already exceeds the best found.
    prune: bool,
    best: Option<S>,
    path: Vec<usize>,
}

impl<'a, S: Scalar, N: PlanarNorm<S> + ?Sized> Walker<'a, S, N> {
    fn new(graph: &ToralGeodesicGraph<S>, norm: &'a N, edge_bound: usize, budget: u64) -> Self {
        let edges: Vec<OrientedEdge<S>> = (0..2 * graph.edges.len())
            .map(|o| {
                let e = &graph.edges[o / 2];
                let forward = o % 2 == 0;
                OrientedEdge {
                    tail: if forward { e.tail } else { e.head },
                    head: if forward { e.head } else { e.tail },
                    class: e.class,
                    forward,
                    disp: graph.oriented_scaled_displacement(o),
                    inter: graph.oriented_intersections(o),
                    length: e.length,
                }
            })
            .collect();
        let mut out = vec![Vec::new(); graph.vertices.len()];
        for (o, e) in edges.iter().enumerate() {
            out[e.tail].push(o);
        }
        Self {
            edges,
            out,
            denom: graph.denom,
            norm,
            edge_bound,
            budget,
            nodes: 0,
            closed: 0,
            prune: false,
            best: None,
            path: Vec::new(),
        }
    }

    fn vector_norm(&self, d: [i64; 2]) -> S {
        let m = S::from_i64_lossy(self.denom);
        self.norm.norm([S::from_i64_lossy(d[0]) / m, S::from_i64_lossy(d[1]) / m])
    }

    /// Depth-first enumeration of cyclically reduced closed walks with at
    /// most `edge_bound` steps, each listed from its smallest oriented edge.
    fn run(&mut self, visit: &mut dyn FnMut(&mut Self, IntegralClass, S)) -> Result<()> {
        for first in 0..self.edges.len() {
            self.path.clear();
            self.path.push(first);
            let e = &self.edges[first];
            let (disp, inter, len, head) = (e.disp, e.inter, e.length, e.head);
            self.step(first, head, disp, inter, len, true, visit)?;
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn step(
        &mut self,
        first: usize,
        at: usize,
        disp: [i64; 2],
        inter: [i64; 2],
        length: S,
        uniform: bool,
        visit: &mut dyn FnMut(&mut Self, IntegralClass, S),
    ) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::SearchLimit {
                budget: self.budget,
                best: self.best.map(|b| format!("{b}")),
            });
        }
        let start = self.edges[first].tail;
        let last = *self.path.last().unwrap();
        if at == start && (last ^ 1) != first {
            let m = self.denom;
            if disp[0] % m != 0 || disp[1] % m != 0 {
                return Err(Error::CheckFailed(format!("closed walk {:?} has non-integral displacement", self.path)));
            }
            let h = IntegralClass::new(disp[0] / m, disp[1] / m);
            self.closed += 1;
            if IntegralClass::new(inter[0], inter[1]) != h {
                return Err(Error::CheckFailed(format!(
                    "closed walk {:?}: displacement class {h} differs from intersection class ({}, {})",
                    self.path, inter[0], inter[1]
                )));
            }
            if !uniform {
                visit(self, h, length);
            }
        }
        if self.path.len() >= self.edge_bound {
            return Ok(());
        }
        if self.prune {
            if let Some(best) = self.best {
                let gap = length - self.vector_norm(disp);
                if gap > best + S::lit(S::TIE_REL_TOL) * (S::one() + length) {
                    return Ok(());
                }
            }
        }
        for idx in 0..self.out[at].len() {
            let o = self.out[at][idx];
            if o < first || o == (last ^ 1) {
                continue;
            }
            let e = &self.edges[o];
            let f = &self.edges[first];
            let still_uniform = uniform && e.class == f.class && e.forward == f.forward;
            let nd = [disp[0] + e.disp[0], disp[1] + e.disp[1]];
            let ni = [inter[0] + e.inter[0], inter[1] + e.inter[1]];
            let nl = length + e.length;
            let head = e.head;
            self.path.push(o);
            let r = self.step(first, head, nd, ni, nl, still_uniform, visit);
            self.path.pop();
            r?;
        }
        Ok(())
    }
}

/// `ζ = ½·min_{ij} q_ij·ℓ_i`.
pub fn zeta<S: Scalar>(graph: &ToralGeodesicGraph<S>) -> S {
    graph.edges.iter().map(|e| e.length).fold(S::infinity(), S::min) / S::lit(2.0)
}

/// `⌊ℓ_k/ζ⌋`, with a relative tolerance so that exact ratios computed in
/// floating point are not rounded down.
pub fn edge_bound<S: Scalar>(graph: &ToralGeodesicGraph<S>, lk: S) -> Result<usize> {
    if !(lk > S::zero() && lk.is_finite()) {
        return invalid(format!("ℓ_k must be positive, got {lk}"));
    }
    let r = (lk / zeta(graph) * (S::one() + S::lit(S::TIE_REL_TOL))).floor();
    r.to_usize().ok_or_else(|| Error::Validation(format!("edge bound {r} out of range")))
}

fn whether_graph_dominates_norm<S: Scalar, N: PlanarNorm<S> + ?Sized>(graph: &ToralGeodesicGraph<S>, norm: &N) -> bool {
    graph.classes.iter().all(|c| {
        let n = norm.norm(c.class.to_vector());
        c.length >= n * (S::one() - S::lit(S::TIE_REL_TOL))
    })
}

/// Computes `ζ`, the edge bound `E = ⌊ℓ_k/ζ⌋`, the minimal gap `ε̃` over the
/// cyclically reduced closed walks with at most `E` edges (walks that run
/// along a single geodesic in one direction are left out), and
/// `Θ = ε̃/(2E)`.
pub fn compute_zeta_epsilon_theta<S: Scalar, N: PlanarNorm<S> + ?Sized>(
    graph: &ToralGeodesicGraph<S>,
    norm: &N,
    lk: S,
    options: EpsilonOptions<S>,
) -> Result<EpsilonReport<S>> {
    let z = zeta(graph);
    let bound = edge_bound(graph, lk)?;
    let mut walker = Walker::new(graph, norm, bound, options.node_budget);
    walker.prune = whether_graph_dominates_norm(graph, norm);
    let mut witness: Option<CycleGap<S>> = None;
    walker.run(&mut |w, h, length| {
        let n = w.norm.norm(h.to_vector());
        let gap = length - n;
        if w.best.map(|b| gap < b).unwrap_or(true) {
            w.best = Some(gap);
            witness = Some(CycleGap {
                cycle: Cycle::from_oriented(&w.path),
                class: h,
                length,
                norm: n,
                gap,
            });
        }
    })?;
    let epsilon = witness.as_ref().map(|c| c.gap);
    if let Some(e) = epsilon {
        if e <= S::zero() {
            return Err(Error::CheckFailed(format!("non-positive gap {e} on cycle {:?}", witness.unwrap().cycle)));
        }
    }
    let (theta, theta_capped) = match epsilon {
        Some(e) => (e / (S::lit(2.0) * S::from_usize(bound).unwrap()), false),
        None => (options.theta_cap.unwrap_or(z), true),
    };
    Ok(EpsilonReport {
        zeta: z,
        edge_bound: bound,
        epsilon,
        theta,
        theta_capped,
        witness,
        nodes: walker.nodes,
        closed_walks: walker.closed,
    })
}

fn canonical_key(path: &[usize]) -> Vec<usize> {
    let n = path.len();
    let rev: Vec<usize> = path.iter().rev().map(|o| o ^ 1).collect();
    let mut best: Option<Vec<usize>> = None;
    for seq in [path, &rev[..]] {
        for r in 0..n {
            let cand: Vec<usize> = seq[r..].iter().chain(&seq[..r]).copied().collect();
            if best.as_ref().map(|b| cand < *b).unwrap_or(true) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

/// Enumerates every admissible cycle with at most `edge_bound` edges and
/// checks `L(c) > ‖h_c‖` on each of them.
pub fn verify_strict_inequality<S: Scalar, N: PlanarNorm<S> + ?Sized>(
    graph: &ToralGeodesicGraph<S>,
    norm: &N,
    edge_bound: usize,
    node_budget: u64,
) -> Result<GapReport<S>> {
    let mut walker = Walker::new(graph, norm, edge_bound, node_budget);
    let mut seen = std::collections::HashSet::new();
    let mut gaps = Vec::new();
    let mut min_cycle: Option<CycleGap<S>> = None;
    let mut violation: Option<CycleGap<S>> = None;
    walker.run(&mut |w, h, length| {
        if !seen.insert(canonical_key(&w.path)) {
            return;
        }
        let n = w.norm.norm(h.to_vector());
        let gap = length - n;
        let entry = || CycleGap {
            cycle: Cycle::from_oriented(&w.path),
            class: h,
            length,
            norm: n,
            gap,
        };
        if gap <= S::zero() && violation.is_none() {
            violation = Some(entry());
        }
        if min_cycle.as_ref().map(|c| gap < c.gap).unwrap_or(true) {
            min_cycle = Some(entry());
        }
        gaps.push(gap);
    })?;
    if let Some(v) = violation {
        return Err(Error::CheckFailed(format!(
            "cycle {:?} in class {} has length {} not exceeding its norm {}",
            v.cycle.steps, v.class, v.length, v.norm
        )));
    }
    gaps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let quantile = |p: f64| gaps[((gaps.len() - 1) as f64 * p).round() as usize];
    Ok(GapReport {
        edge_bound,
        cycles: gaps.len(),
        min_gap: gaps.first().copied(),
        quartiles: (!gaps.is_empty()).then(|| [quantile(0.25), quantile(0.5), quantile(0.75)]),
        max_gap: gaps.last().copied(),
        min_cycle,
        nodes: walker.nodes,
        closed_walks: walker.closed,
    })
}

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::norms::IntegralClass;
use crate::scalar::Scalar;
use crate::toral_graph::{to_scalar, Sublattice, ToralGeodesicGraph};

/// An undirected edge of the quotient graph. Traversed from `u` to `v` it
/// moves the lift by `displacement` periods; traversed backwards, by the
/// negative.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct PeriodicEdge<S> {
    pub u: usize,
    pub v: usize,
    pub weight: S,
    pub displacement: [i64; 2],
}

/// What a node of a canyon graph stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Grid,
    Hub,
    Corridor,
}

/// A `Z²`-periodic graph with positive weights: the quotient graph on the
/// torus together with the period crossing of each edge. Every node has a
/// position in `[0,1)²`; positions feed the search heuristic and window
/// certification, never the lengths themselves.
#[derive(Clone, Debug, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct PeriodicWeightedGraph<S> {
    pub positions: Vec<[S; 2]>,
    pub kinds: Vec<NodeKind>,
    pub edges: Vec<PeriodicEdge<S>>,
    #[serde(skip)]
    pub(crate) adjacency: Vec<Vec<(usize, S, [i64; 2])>>,
    /// Largest ratio of geometric sup-norm displacement to weight.
    #[serde(skip)]
    pub(crate) slope: S,
    #[serde(skip)]
    pub(crate) lattice: Sublattice,
}

impl<S: Scalar> PeriodicWeightedGraph<S> {
    pub fn new(positions: Vec<[S; 2]>, edges: Vec<PeriodicEdge<S>>) -> Result<Self> {
        let kinds = vec![NodeKind::Grid; positions.len()];
        Self::with_kinds(positions, kinds, edges)
    }

    pub fn with_kinds(positions: Vec<[S; 2]>, kinds: Vec<NodeKind>, edges: Vec<PeriodicEdge<S>>) -> Result<Self> {
        let n = positions.len();
        if n == 0 {
            return invalid("graph has no nodes");
        }
        if kinds.len() != n {
            return invalid("one node kind per node is required");
        }
        for p in &positions {
            if !(p[0] >= S::zero() && p[0] < S::one() && p[1] >= S::zero() && p[1] < S::one()) {
                return invalid(format!("node position ({}, {}) is outside [0,1)²", p[0], p[1]));
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        let mut slope = S::zero();
        for (i, e) in edges.iter().enumerate() {
            if e.u >= n || e.v >= n {
                return invalid(format!("edge {i} names a missing node"));
            }
            if !(e.weight > S::zero() && e.weight.is_finite()) {
                return invalid(format!("edge {i} has non-positive weight {}", e.weight));
            }
            let d = e.displacement;
            adjacency[e.u].push((e.v, e.weight, d));
            adjacency[e.v].push((e.u, e.weight, [-d[0], -d[1]]));
            let g = geometric(&positions, e.u, e.v, d);
            slope = slope.max(g[0].abs().max(g[1].abs()) / e.weight);
        }
        let mut graph = Self {
            positions,
            kinds,
            edges,
            adjacency,
            slope,
            lattice: Sublattice::default(),
        };
        graph.lattice = graph.cycle_lattice()?;
        Ok(graph)
    }

    pub fn node_count(&self) -> usize {
        self.positions.len()
    }

    /// Upper bound on `|Δposition|_∞ / length` along any path.
    pub fn slope_bound(&self) -> S {
        self.slope
    }

    /// Spanning-tree traversal: checks connectivity and returns the lattice
    /// of homology classes realized by closed walks.
    fn cycle_lattice(&self) -> Result<Sublattice> {
        let n = self.node_count();
        let mut cell: Vec<Option<[i64; 2]>> = vec![None; n];
        cell[0] = Some([0, 0]);
        let mut stack = vec![0];
        let mut lattice = Sublattice::default();
        while let Some(u) = stack.pop() {
            let cu = cell[u].unwrap();
            for &(v, _, d) in &self.adjacency[u] {
                let cv = [cu[0] + d[0], cu[1] + d[1]];
                match cell[v] {
                    None => {
                        cell[v] = Some(cv);
                        stack.push(v);
                    }
                    Some(c) => lattice.add([cv[0] - c[0], cv[1] - c[1]]),
                }
            }
        }
        if cell.iter().any(Option::is_none) {
            return invalid("quotient graph is not connected");
        }
        Ok(lattice)
    }

    pub fn realizes(&self, h: IntegralClass) -> bool {
        self.lattice.contains([h.a, h.b])
    }

    /// Shortest-path distances in the quotient graph (periods ignored).
    pub fn quotient_distances(&self, source: usize) -> Vec<S> {
        use std::cmp::Reverse;
        use std::collections::BinaryHeap;
        let mut dist = vec![S::infinity(); self.node_count()];
        dist[source] = S::zero();
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((crate::toral_graph::Dist(S::zero()), source)));
        while let Some(Reverse((crate::toral_graph::Dist(d), u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &(v, w, _) in &self.adjacency[u] {
                if d + w < dist[v] {
                    dist[v] = d + w;
                    heap.push(Reverse((crate::toral_graph::Dist(d + w), v)));
                }
            }
        }
        dist
    }

    /// Copy without the edges touching nodes of the given kinds (used to
    /// isolate the background).
    pub fn without_kinds(&self, drop: &[NodeKind]) -> Result<Self> {
        let keep: Vec<bool> = self.kinds.iter().map(|k| !drop.contains(k)).collect();
        let mut index = vec![usize::MAX; self.node_count()];
        let mut positions = Vec::new();
        let mut kinds = Vec::new();
        for i in 0..self.node_count() {
            if keep[i] {
                index[i] = positions.len();
                positions.push(self.positions[i]);
                kinds.push(self.kinds[i]);
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| keep[e.u] && keep[e.v])
            .map(|e| PeriodicEdge {
                u: index[e.u],
                v: index[e.v],
                ..e.clone()
            })
            .collect();
        Self::with_kinds(positions, kinds, edges)
    }
}

fn geometric<S: Scalar>(positions: &[[S; 2]], u: usize, v: usize, d: [i64; 2]) -> [S; 2] {
    [
        positions[v][0] + S::from_i64_lossy(d[0]) - positions[u][0],
        positions[v][1] + S::from_i64_lossy(d[1]) - positions[u][1],
    ]
}

/// The `n × n` four-neighbour grid on the torus with all edges of weight
/// `weight`.
pub fn uniform_grid<S: Scalar>(n: usize, weight: S) -> Result<PeriodicWeightedGraph<S>> {
    if n < 2 {
        return invalid("grid resolution must be at least 2");
    }
    let (positions, edges) = grid_parts(n, weight);
    PeriodicWeightedGraph::new(positions, edges)
}

fn grid_parts<S: Scalar>(n: usize, weight: S) -> (Vec<[S; 2]>, Vec<PeriodicEdge<S>>) {
    let nf = S::from_usize(n).unwrap();
    let id = |i: usize, j: usize| j * n + i;
    let mut positions = Vec::with_capacity(n * n);
    let mut edges = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            positions.push([S::from_usize(i).unwrap() / nf, S::from_usize(j).unwrap() / nf]);
        }
    }
    for j in 0..n {
        for i in 0..n {
            let wrap = |k: usize| if k + 1 == n { 1 } else { 0 };
            edges.push(PeriodicEdge {
                u: id(i, j),
                v: id((i + 1) % n, j),
                weight,
                displacement: [wrap(i), 0],
            });
            edges.push(PeriodicEdge {
                u: id(i, j),
                v: id(i, (j + 1) % n),
                weight,
                displacement: [0, wrap(j)],
            });
        }
    }
    (positions, edges)
}

/// Discrete model of a metric that is cheap exactly along the geodesic
/// graph and expensive elsewhere.
///
/// Nodes: the `n × n` background grid (edge weight `background/n`), one hub
/// per graph vertex and the subdivision points of each graph edge. Corridor
/// pieces carry the exact edge lengths and every corridor incident to a
/// vertex ends at its hub, so moving between corridors there costs nothing,
/// within the allowed hub transfer cost `Θ` (which must be positive). Every
/// hub and corridor point is tied to its nearest grid node by a connector of
/// weight `background/2`.
pub fn build_canyon_graph<S: Scalar>(
    graph: &ToralGeodesicGraph<S>,
    theta: S,
    background: S,
    n: usize,
    lk: S,
) -> Result<PeriodicWeightedGraph<S>> {
    if !(theta > S::zero() && theta.is_finite()) {
        return invalid(format!("hub transfer bound Θ must be positive, got {theta}"));
    }
    if !(background >= lk * (S::one() - S::lit(S::TIE_REL_TOL))) || !background.is_finite() {
        return invalid(format!("background systole {background} must be at least ℓ_k = {lk}"));
    }
    if n < 64 {
        return invalid(format!("grid resolution must be at least 64, got {n}"));
    }
    let nf = S::from_usize(n).unwrap();
    let vpos: Vec<[S; 2]> = graph
        .vertices
        .iter()
        .map(|p| [to_scalar::<S>(p[0]), to_scalar::<S>(p[1])])
        .collect();
    for i in 0..vpos.len() {
        for j in 0..i {
            let d = |k: usize| {
                let t = (vpos[i][k] - vpos[j][k]).abs();
                t.min(S::one() - t)
            };
            if d(0).max(d(1)) * nf < S::lit(2.0) {
                return invalid(format!("resolution {n} does not separate the hubs at vertices {j} and {i}"));
            }
        }
    }
    let (mut positions, mut edges) = grid_parts(n, background / nf);
    let mut kinds = vec![NodeKind::Grid; positions.len()];
    let nearest_grid = |p: [S; 2]| -> (usize, [i64; 2]) {
        let snap = |x: S| {
            let k = (x * nf).round().to_i64().unwrap();
            if k as usize == n {
                (0usize, 1i64)
            } else {
                (k as usize, 0)
            }
        };
        let (i, di) = snap(p[0]);
        let (j, dj) = snap(p[1]);
        (j * n + i, [di, dj])
    };
    let connector = background / S::lit(2.0);
    let add_node = |positions: &mut Vec<[S; 2]>, kinds: &mut Vec<NodeKind>, p: [S; 2], kind| {
        positions.push(p);
        kinds.push(kind);
        positions.len() - 1
    };
    let hubs: Vec<usize> = vpos
        .iter()
        .map(|p| add_node(&mut positions, &mut kinds, *p, NodeKind::Hub))
        .collect();
    for (h, p) in hubs.iter().zip(&vpos) {
        let (g, d) = nearest_grid(*p);
        edges.push(PeriodicEdge {
            u: *h,
            v: g,
            weight: connector,
            displacement: d,
        });
    }
    for e in &graph.edges {
        let d = [to_scalar::<S>(e.displacement[0]), to_scalar::<S>(e.displacement[1])];
        let len2 = (d[0] * d[0] + d[1] * d[1]).sqrt();
        let pieces = (len2 * nf).ceil().to_usize().unwrap().max(1);
        let start = vpos[e.tail];
        let mut prev = hubs[e.tail];
        let mut prev_cell = [0i64, 0];
        for s in 1..=pieces {
            let (node, cell) = if s == pieces {
                (hubs[e.head], e.crossing)
            } else {
                let t = S::from_usize(s).unwrap() / S::from_usize(pieces).unwrap();
                let lifted = [start[0] + t * d[0], start[1] + t * d[1]];
                let cell = [lifted[0].floor().to_i64().unwrap(), lifted[1].floor().to_i64().unwrap()];
                let p = [lifted[0] - lifted[0].floor(), lifted[1] - lifted[1].floor()];
                let node = add_node(&mut positions, &mut kinds, p, NodeKind::Corridor);
                let (g, gd) = nearest_grid(p);
                edges.push(PeriodicEdge {
                    u: node,
                    v: g,
                    weight: connector,
                    displacement: gd,
                });
                (node, cell)
            };
            edges.push(PeriodicEdge {
                u: prev,
                v: node,
                weight: e.length / S::from_usize(pieces).unwrap(),
                displacement: [cell[0] - prev_cell[0], cell[1] - prev_cell[1]],
            });
            prev = node;
            prev_cell = cell;
        }
    }
    PeriodicWeightedGraph::with_kinds(positions, kinds, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toral_graph::build_graph;

    #[test]
    fn grid_is_connected_and_full_rank() {
        let g = uniform_grid(4, 0.25f64).unwrap();
        assert_eq!(g.node_count(), 16);
        assert_eq!(g.edges.len(), 32);
        assert!(g.realizes(IntegralClass::new(0, 1)) && g.realizes(IntegralClass::new(3, -2)));
        assert!((g.slope_bound() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_weights_and_disconnected() {
        let pos = vec![[0.0, 0.0], [0.5, 0.5]];
        let e = |w| PeriodicEdge {
            u: 0,
            v: 0,
            weight: w,
            displacement: [1, 0],
        };
        assert!(PeriodicWeightedGraph::new(pos.clone(), vec![e(0.0)]).is_err());
        assert!(PeriodicWeightedGraph::new(pos, vec![e(1.0)]).is_err());
    }

    #[test]
    fn canyon_validation() {
        let g = build_graph(&[(IntegralClass::new(1, 0), 1.0), (IntegralClass::new(0, 1), 1.0)]).unwrap();
        assert!(build_canyon_graph(&g, 0.0, 1.0, 64, 1.0).is_err());
        assert!(build_canyon_graph(&g, 0.1, 0.5, 64, 1.0).is_err());
        assert!(build_canyon_graph(&g, 0.1, 1.0, 32, 1.0).is_err());
        let c = build_canyon_graph(&g, 0.1, 1.0, 64, 1.0).unwrap();
        // grid, one hub, 63 interior points per loop
        assert_eq!(c.node_count(), 64 * 64 + 1 + 2 * 63);
        let corridor: f64 = c
            .edges
            .iter()
            .filter(|e| c.kinds[e.u] != NodeKind::Grid && c.kinds[e.v] != NodeKind::Grid)
            .map(|e| e.weight)
            .sum();
        assert!((corridor - 2.0).abs() < 1e-12);
    }
}

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use super::graph::PeriodicWeightedGraph;
use crate::error::{invalid, Error, Result};
use crate::multiplicity::{profile_from_lengths, MultiplicityProfile};
use crate::norms::{canonical_classes_in_box, IntegralClass};
use crate::scalar::Scalar;
use crate::toral_graph::Dist;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct SpectrumEntry<S> {
    pub class: IntegralClass,
    pub length: S,
    /// Lifted path `(node, cell)` from the start node in cell `(0,0)` to its
    /// translate by the class. Empty for the trivial class.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witness: Vec<(usize, [i64; 2])>,
}

/// Window certified for cycles of length at most `length`: their lifts stay
/// within `slope·length` of the start, in the sup norm.
pub(crate) fn required_window<S: Scalar>(slope: S, length: S) -> i64 {
    (slope * length * (S::one() + S::lit(S::TIE_REL_TOL)))
        .floor()
        .to_i64()
        .unwrap_or(i64::MAX / 4)
        + 1
}

/// Above this many `(node, cell)` states the search keeps them in a hash map.
const DENSE_STATE_LIMIT: u64 = 1 << 23;

/// Tentative distance and predecessor of each visited cover state.
pub(crate) trait StateStore<S> {
    fn reset(&mut self);
    fn get(&self, k: usize) -> Option<(S, usize)>;
    fn set(&mut self, k: usize, d: S, parent: usize);
}

impl<S: Scalar> StateStore<S> for HashMap<usize, (S, usize)> {
    fn reset(&mut self) {
        self.clear();
    }
    fn get(&self, k: usize) -> Option<(S, usize)> {
        HashMap::get(self, &k).copied()
    }
    fn set(&mut self, k: usize, d: S, parent: usize) {
        self.insert(k, (d, parent));
    }
}

/// Flat arrays reused across searches; a generation counter marks the
/// entries written by the current search.
pub(crate) struct DenseStore<S> {
    dist: Vec<S>,
    parent: Vec<usize>,
    stamp: Vec<u32>,
    generation: u32,
}

impl<S: Scalar> DenseStore<S> {
    fn new(states: usize) -> Self {
        Self {
            dist: vec![S::zero(); states],
            parent: vec![0; states],
            stamp: vec![0; states],
            generation: 0,
        }
    }
}

impl<S: Scalar> StateStore<S> for DenseStore<S> {
    fn reset(&mut self) {
        self.generation += 1;
    }
    fn get(&self, k: usize) -> Option<(S, usize)> {
        (self.stamp[k] == self.generation).then(|| (self.dist[k], self.parent[k]))
    }
    fn set(&mut self, k: usize, d: S, parent: usize) {
        self.stamp[k] = self.generation;
        self.dist[k] = d;
        self.parent[k] = parent;
    }
}

impl<S: Scalar> PeriodicWeightedGraph<S> {
    /// Nodes some shortest cycle in the (canonical, nontrivial) class `h`
    /// must pass through: tails of edges that cross the seam in the direction
    /// of `h`, corridor and hub nodes first.
    fn seam_starts(&self, h: IntegralClass) -> Vec<usize> {
        let axis = if h.a != 0 { 0 } else { 1 };
        let sign = if [h.a, h.b][axis] > 0 { 1 } else { -1 };
        let mut starts: Vec<usize> = (0..self.node_count())
            .filter(|&u| self.adjacency[u].iter().any(|(_, _, d)| d[axis] * sign > 0))
            .collect();
        starts.sort_by_key(|&u| (self.kinds[u] == super::NodeKind::Grid, u));
        starts
    }

    fn heuristic(&self, v: usize, cell: [i64; 2], target: [S; 2]) -> S {
        if self.slope == S::zero() {
            return S::zero();
        }
        let p = self.positions[v];
        let dx = (target[0] - p[0] - S::from_i64_lossy(cell[0])).abs();
        let dy = (target[1] - p[1] - S::from_i64_lossy(cell[1])).abs();
        dx.max(dy) / self.slope
    }

    /// A* from `start` in cell `(0,0)` to `start` in cell `h`, inside the
    /// window, abandoning paths that cannot beat `incumbent`.
    fn search_from(
        &self,
        store: &mut impl StateStore<S>,
        start: usize,
        h: IntegralClass,
        window: i64,
        incumbent: Option<S>,
    ) -> Option<(S, Vec<(usize, [i64; 2])>)> {
        store.reset();
        let side = 2 * window + 1;
        let key = |v: usize, c: [i64; 2]| (v * side as usize + (c[1] + window) as usize) * side as usize + (c[0] + window) as usize;
        let unkey = |k: usize| {
            let cx = (k % side as usize) as i64 - window;
            let rest = k / side as usize;
            let cy = (rest % side as usize) as i64 - window;
            (rest / side as usize, [cx, cy])
        };
        let target_key = key(start, [h.a, h.b]);
        let sp = self.positions[start];
        let target = [sp[0] + S::from_i64_lossy(h.a), sp[1] + S::from_i64_lossy(h.b)];
        let mut heap = BinaryHeap::new();
        let k0 = key(start, [0, 0]);
        store.set(k0, S::zero(), usize::MAX);
        heap.push(Reverse((Dist(self.heuristic(start, [0, 0], target)), Dist(S::zero()), k0)));
        let beats = |f: S| incumbent.map(|b| f < b).unwrap_or(true);
        while let Some(Reverse((Dist(f), Dist(g), k))) = heap.pop() {
            if !beats(f) {
                return None;
            }
            if store.get(k).map(|x| x.0 < g).unwrap_or(false) {
                continue;
            }
            if k == target_key {
                let mut path = vec![unkey(k)];
                let mut cur = k;
                while let Some((_, prev)) = store.get(cur) {
                    if prev == usize::MAX {
                        break;
                    }
                    path.push(unkey(prev));
                    cur = prev;
                }
                path.reverse();
                return Some((g, path));
            }
            let (u, cell) = unkey(k);
            for &(v, w, d) in &self.adjacency[u] {
                let nc = [cell[0] + d[0], cell[1] + d[1]];
                if nc[0].abs() > window || nc[1].abs() > window {
                    continue;
                }
                let ng = g + w;
                let nf = ng + self.heuristic(v, nc, target);
                if !beats(nf) {
                    continue;
                }
                let nk = key(v, nc);
                if store.get(nk).map(|x| ng < x.0).unwrap_or(true) {
                    store.set(nk, ng, k);
                    heap.push(Reverse((Dist(nf), Dist(ng), nk)));
                }
            }
        }
        None
    }

    /// Length `f(h)` of a shortest closed walk in class `h`, searching the
    /// cover within cells `|z|_∞ ≤ window`. `Ok(None)` when no closed walk
    /// realizes `h`.
    pub fn marked_min_length(&self, h: IntegralClass, window: i64) -> Result<Option<SpectrumEntry<S>>> {
        if h.is_trivial() {
            return Ok(Some(SpectrumEntry {
                class: h,
                length: S::zero(),
                witness: Vec::new(),
            }));
        }
        if window < 1 {
            return invalid("window must be positive");
        }
        if !self.realizes(h) {
            return Ok(None);
        }
        if h.linf() > window {
            return Err(Error::WindowTooSmall {
                window,
                required: h.linf() + 1,
            });
        }
        let states = self.node_count() as u64 * (2 * window as u64 + 1).pow(2);
        let mut found: Option<(S, Vec<(usize, [i64; 2])>)> = None;
        let starts = self.seam_starts(h);
        if states <= DENSE_STATE_LIMIT {
            let mut store = DenseStore::new(states as usize);
            for s in starts {
                if let Some(r) = self.search_from(&mut store, s, h, window, found.as_ref().map(|f| f.0)) {
                    found = Some(r);
                }
            }
        } else {
            let mut store = HashMap::new();
            for s in starts {
                if let Some(r) = self.search_from(&mut store, s, h, window, found.as_ref().map(|f| f.0)) {
                    found = Some(r);
                }
            }
        }
        let Some((length, witness)) = found else {
            return Err(Error::WindowTooSmall {
                window,
                required: window + 1,
            });
        };
        let required = required_window(self.slope, length);
        if window < required {
            return Err(Error::WindowTooSmall { window, required });
        }
        Ok(Some(SpectrumEntry {
            class: h,
            length,
            witness,
        }))
    }

    /// [`Self::marked_min_length`] with the window grown until certified.
    pub fn marked_min_length_auto(&self, h: IntegralClass) -> Result<Option<SpectrumEntry<S>>> {
        let mut window = h.linf().max(1);
        loop {
            match self.marked_min_length(h, window) {
                Err(Error::WindowTooSmall { required, .. }) if window < 1 << 12 => {
                    window = required.max(window + 1);
                }
                other => return other,
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct StableNormEstimate<S> {
    pub class: IntegralClass,
    /// `f(n·h)/n` for `n = 1, …, n_max`.
    pub ratios: Vec<S>,
    pub estimate: S,
    /// Smallest `n` attaining the estimate.
    pub attained_at: usize,
    /// `f(n·h) = n·f(h)` for every computed `n` (up to the tie tolerance).
    pub stable: bool,
}

pub fn stable_norm_estimate<S: Scalar>(
    pg: &PeriodicWeightedGraph<S>,
    h: IntegralClass,
    n_max: usize,
) -> Result<StableNormEstimate<S>> {
    if n_max < 1 {
        return invalid("n_max must be at least 1");
    }
    if h.is_trivial() {
        return invalid("the stable norm estimate needs a nontrivial class");
    }
    let ratios = (1..=n_max)
        .map(|n| {
            let e = pg
                .marked_min_length_auto(h.scaled(n as i64))?
                .ok_or_else(|| Error::Validation(format!("class {} is not realized by the graph", h.scaled(n as i64))))?;
            Ok(e.length / S::from_usize(n).unwrap())
        })
        .collect::<Result<Vec<S>>>()?;
    let estimate = ratios.iter().copied().fold(S::infinity(), S::min);
    let tol = S::lit(S::TIE_REL_TOL) * estimate.max(S::one());
    let attained_at = ratios.iter().position(|r| *r <= estimate + tol).unwrap() + 1;
    let stable = ratios.iter().all(|r| (*r - ratios[0]).abs() <= tol);
    Ok(StableNormEstimate {
        class: h,
        ratios,
        estimate,
        attained_at,
        stable,
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct Spectrum<S> {
    pub bound: S,
    pub tie_tolerance: S,
    pub entries: Vec<SpectrumEntry<S>>,
    pub profile: MultiplicityProfile<S>,
}

/// The minimum marked length spectrum up to `bound`: every canonical class
/// whose shortest closed walk has length at most `bound`, sorted by length
/// and then class, grouped under the relative `tie_tolerance`.
///
/// Classes farther than `slope·bound` in the sup norm cannot qualify, which
/// bounds the candidate set. `window` of `None` grows windows per class.
pub fn spectrum<S: Scalar>(
    pg: &PeriodicWeightedGraph<S>,
    bound: S,
    window: Option<i64>,
    tie_tolerance: S,
) -> Result<Spectrum<S>> {
    if !(bound > S::zero() && bound.is_finite()) {
        return invalid(format!("norm bound must be positive, got {bound}"));
    }
    if !(tie_tolerance >= S::zero()) {
        return invalid("tie tolerance must be nonnegative");
    }
    let radius = (pg.slope * bound * (S::one() + S::lit(S::TIE_REL_TOL)))
        .floor()
        .to_i64()
        .ok_or_else(|| Error::Validation("search radius overflows".into()))?;
    let classes: Vec<IntegralClass> = canonical_classes_in_box(radius)
        .into_iter()
        .filter(|h| !h.is_trivial())
        .collect();
    let computed: Vec<Option<SpectrumEntry<S>>> = classes
        .par_iter()
        .map(|h| match window {
            Some(w) => pg.marked_min_length(*h, w),
            None => pg.marked_min_length_auto(*h),
        })
        .collect::<Result<_>>()?;
    let mut entries: Vec<SpectrumEntry<S>> = vec![SpectrumEntry {
        class: IntegralClass::trivial(),
        length: S::zero(),
        witness: Vec::new(),
    }];
    entries.extend(computed.into_iter().flatten().filter(|e| e.length <= bound));
    entries.sort_by(|x, y| {
        x.length
            .partial_cmp(&y.length)
            .unwrap()
            .then_with(|| x.class.lex_cmp(&y.class))
    });
    // lengths equal up to the tolerance are listed lexicographically
    let mut start = 0;
    while start < entries.len() {
        let first = entries[start].length;
        let end = start + entries[start..].iter().take_while(|e| e.length - first <= tie_tolerance * first).count();
        entries[start..end].sort_by(|x, y| x.class.lex_cmp(&y.class));
        start = end;
    }
    let lengths: Vec<(IntegralClass, S)> = entries.iter().map(|e| (e.class, e.length)).collect();
    let profile = profile_from_lengths(&lengths, tie_tolerance, false)?;
    Ok(Spectrum {
        bound,
        tie_tolerance,
        entries,
        profile,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periodic_metric::{build_canyon_graph, uniform_grid, NodeKind};
    use crate::toral_graph::build_graph;

    fn l1_grid() -> PeriodicWeightedGraph<f64> {
        uniform_grid(16, 1.0 / 16.0).unwrap()
    }

    #[test]
    fn grid_lengths_follow_l1() {
        let g = l1_grid();
        for (h, l) in [([1, 0], 1.0), ([1, 1], 2.0), ([2, 1], 3.0), ([1, -2], 3.0)] {
            let e = g.marked_min_length_auto(IntegralClass::from(h)).unwrap().unwrap();
            assert!((e.length - l).abs() < 1e-12, "{h:?}: {}", e.length);
            assert_eq!(e.witness.first().unwrap().0, e.witness.last().unwrap().0);
            assert_eq!(e.witness.last().unwrap().1, h);
        }
    }

    #[test]
    fn window_errors() {
        let g = l1_grid();
        let err = g.marked_min_length(IntegralClass::new(3, 0), 2).unwrap_err();
        assert!(matches!(err, Error::WindowTooSmall { .. }));
    }

    #[test]
    fn grid_spectrum_is_l1_ball() {
        let s = spectrum(&l1_grid(), 2.1, None, 1e-9).unwrap();
        let got: Vec<([i64; 2], f64)> = s.entries.iter().map(|e| (e.class.into(), e.length)).collect();
        let expect = [
            ([0, 0], 0.0),
            ([0, 1], 1.0),
            ([1, 0], 1.0),
            ([0, 2], 2.0),
            ([1, 1], 2.0),
            ([1, -1], 2.0),
            ([2, 0], 2.0),
        ];
        assert_eq!(got.len(), expect.len());
        for ((c, l), (ec, el)) in got.iter().zip(expect) {
            assert_eq!(*c, ec);
            assert!((l - el).abs() < 1e-12);
        }
        assert_eq!(s.profile.groups.last().unwrap().m, 4);
        assert_eq!(s.profile.groups.last().unwrap().n, 3);
        let small = spectrum(&l1_grid(), 0.5, None, 1e-9).unwrap();
        assert_eq!(small.entries.len(), 1);
    }

    #[test]
    fn grid_stable_norm() {
        let s = stable_norm_estimate(&l1_grid(), IntegralClass::new(1, 0), 4).unwrap();
        assert!(s.ratios.iter().all(|r| (r - 1.0).abs() < 1e-12));
        assert_eq!(s.attained_at, 1);
        assert!(s.stable);
    }

    #[test]
    fn square_canyon() {
        let g = build_graph::<f64>(&[(IntegralClass::new(1, 0), 1.0), (IntegralClass::new(0, 1), 1.0)]).unwrap();
        let c = build_canyon_graph(&g, 0.14, 1.0, 64, 1.0).unwrap();
        let f10 = c.marked_min_length_auto(IntegralClass::new(1, 0)).unwrap().unwrap().length;
        assert!((f10 - 1.0).abs() < 1e-12);
        let f11 = c.marked_min_length_auto(IntegralClass::new(1, 1)).unwrap().unwrap().length;
        assert!(f11 >= 2f64.sqrt() && f11 <= 2.0 + 0.14 + 1e-12, "{f11}");
        let s = stable_norm_estimate(&c, IntegralClass::new(1, 0), 3).unwrap();
        assert!(s.ratios.iter().all(|r| (r - 1.0).abs() < 1e-12));
        let s = stable_norm_estimate(&c, IntegralClass::new(1, 1), 2).unwrap();
        assert!(s.ratios.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        assert!(s.ratios.iter().all(|r| *r >= 1.0 - 1e-9));
        let background = c.without_kinds(&[NodeKind::Hub, NodeKind::Corridor]).unwrap();
        let fb = background.marked_min_length_auto(IntegralClass::new(1, 0)).unwrap().unwrap().length;
        assert!(fb >= 1.0 - 1e-12);
    }
}

use std::sync::atomic::{AtomicBool, AtomicI64, AtomicU64, Ordering as AtomicOrdering};
use std::sync::Mutex;

use num_integer::Integer;
use num_rational::Rational64;
use rayon::prelude::*;
use serde::Serialize;

use super::polygon::{add, angle_cmp, cross, half, pick_counts, LatticePolygon, Point};
use crate::error::{invalid, Error, Result};

/// Largest `k` accepted by [`min_area_convex_kgon`].
pub const MAX_K: usize = 12;

pub const DEFAULT_BUDGET: u64 = 2_000_000_000;

/// Default bound on edge-vector coordinates in the branch and bound search.
pub fn default_edge_bound(k: usize) -> i64 {
    if k <= 8 {
        6
    } else {
        10
    }
}

/// Nonzero vectors with `|x| ≤ xmax`, `|y| ≤ ymax`, sorted by polar angle in
/// `[0, 2π)` and then by length, each tagged with an id shared by vectors of
/// the same direction.
pub(crate) fn angle_sorted_vectors(xmax: i64, ymax: i64) -> Vec<(Point, u32)> {
    let mut v: Vec<Point> = Vec::new();
    for x in -xmax..=xmax {
        for y in -ymax..=ymax {
            if x != 0 || y != 0 {
                v.push([x, y]);
            }
        }
    }
    v.sort_by(|a, b| angle_cmp(*a, *b).then((a[0].abs() + a[1].abs()).cmp(&(b[0].abs() + b[1].abs()))));
    let mut out = Vec::with_capacity(v.len());
    let mut id = 0u32;
    for (i, p) in v.iter().enumerate() {
        if i > 0 && angle_cmp(v[i - 1], *p) != std::cmp::Ordering::Equal {
            id += 1;
        }
        out.push((*p, id));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct MinAreaResult {
    pub k: usize,
    #[serde(serialize_with = "crate::rational::serde_ratio::serialize")]
    pub area: Rational64,
    pub witness: LatticePolygon,
    /// `true` when a width-bounded exhaustive pass confirmed that no convex
    /// `k`-gon has smaller area.
    pub certified: bool,
    /// Exact lower bound from the certification pass.
    #[serde(serialize_with = "crate::rational::serde_ratio::serialize")]
    pub lower_bound: Rational64,
    pub edge_bound: i64,
    pub nodes: u64,
}

/// Minimum of twice the area over convex `k`-gons whose edge vectors are
/// drawn from `vecs` (angle sorted, one per direction) and whose vertices
/// stay within `|x| ≤ xr`, `|y| ≤ yr` of the starting vertex. Dynamic
/// programming over (edges used, current vertex) in angle order.
pub(crate) fn min_area2_dp(k: usize, vecs: &[(Point, u32)], xr: i64, yr: i64) -> Option<i64> {
    let width = (2 * xr + 1) as usize;
    let cells = width * (2 * yr + 1) as usize;
    let idx = |p: Point| -> Option<usize> {
        if p[0].abs() > xr || p[1].abs() > yr {
            None
        } else {
            Some((p[1] + yr) as usize * width + (p[0] + xr) as usize)
        }
    };
    let unidx = |i: usize| -> Point { [(i % width) as i64 - xr, (i / width) as i64 - yr] };
    let mut dp = vec![vec![i64::MAX; cells]; k + 1];
    dp[0][idx([0, 0]).unwrap()] = 0;
    let mut start = 0;
    while start < vecs.len() {
        let mut end = start;
        while end < vecs.len() && vecs[end].1 == vecs[start].1 {
            end += 1;
        }
        let snapshot: Vec<Vec<i64>> = dp[..k].to_vec();
        for (v, _) in &vecs[start..end] {
            for c in 0..k {
                for (cell, &a) in snapshot[c].iter().enumerate() {
                    if a == i64::MAX {
                        continue;
                    }
                    let p = unidx(cell);
                    if let Some(j) = idx(add(p, *v)) {
                        let cand = a + cross(p, *v);
                        if cand < dp[c + 1][j] {
                            dp[c + 1][j] = cand;
                        }
                    }
                }
            }
        }
        start = end;
    }
    let best = dp[k][idx([0, 0]).unwrap()];
    (best != i64::MAX).then_some(best)
}

/// Exact minimum of twice the area over all convex lattice `k`-gons,
/// provided some `k`-gon of twice-area `upper2` exists.
///
/// Any convex body of area `A` has lattice width `w` with `A ≥ 3w²/8`. After
/// a unimodular change of coordinates the width is the `y`-extent, and a
/// shear puts the bottom-to-top segment within horizontal offset `w − 1`;
/// the two triangles this segment cuts off on either side then bound the
/// `x`-extent by `w − 1 + ⌊2A/w⌋`. Each `k`-gon has `w ≥ ⌈k/2⌉ − 1` since a
/// horizontal line meets at most two vertices.
pub(crate) fn certified_min_area2(k: usize, upper2: i64) -> i64 {
    let w_min = ((k as i64 + 1) / 2 - 1).max(1);
    // w² ≤ 8A/3 = 4·(2A)/3
    let mut w_max = 0;
    while 3 * (w_max + 1) * (w_max + 1) <= 4 * upper2 {
        w_max += 1;
    }
    let mut best = upper2;
    for w in w_min..=w_max {
        // 2A/w with A ≤ upper2/2
        let x = w - 1 + Integer::div_floor(&upper2, &(2 * w));
        let vecs = angle_sorted_vectors(x, w);
        if let Some(b) = min_area2_dp(k, &vecs, x, w) {
            best = best.min(b);
        }
    }
    best
}

struct Search<'a> {
    k: usize,
    bound: i64,
    vecs: &'a [(Point, u32)],
    /// `lb2[j]`: lower bound on twice the area of a convex `j`-gon.
    lb2: &'a [i64],
    best: AtomicI64,
    nodes: AtomicU64,
    budget: u64,
    exhausted: AtomicBool,
}

#[derive(Default)]
struct Local {
    best: Option<(i64, (i64, Vec<Point>), LatticePolygon)>,
    pending_nodes: u64,
}

impl Search<'_> {
    fn record(&self, area2: i64, edges: &[Point], local: &mut Local) {
        let poly = match LatticePolygon::from_edges([0, 0], edges) {
            Ok(p) => p,
            Err(_) => return,
        };
        self.best.fetch_min(area2, AtomicOrdering::Relaxed);
        let better = match &local.best {
            None => true,
            Some((a, key, _)) => area2 < *a || (area2 == *a && poly.witness_key() < *key),
        };
        if better {
            let key = poly.witness_key();
            local.best = Some((area2, key, poly));
        }
    }

    fn tick(&self, local: &mut Local) -> bool {
        local.pending_nodes += 1;
        if local.pending_nodes >= 4096 {
            let total = self.nodes.fetch_add(local.pending_nodes, AtomicOrdering::Relaxed) + local.pending_nodes;
            local.pending_nodes = 0;
            if total > self.budget {
                self.exhausted.store(true, AtomicOrdering::Relaxed);
            }
        }
        !self.exhausted.load(AtomicOrdering::Relaxed)
    }

    fn dfs(&self, last: usize, pos: Point, area2: i64, edges: &mut Vec<Point>, local: &mut Local) {
        let remaining = self.k - edges.len();
        if remaining == 1 {
            let w = [-pos[0], -pos[1]];
            if w != [0, 0]
                && w[0].abs() <= self.bound
                && w[1].abs() <= self.bound
                && angle_cmp(self.vecs[last].0, w) == std::cmp::Ordering::Less
                && area2 <= self.best.load(AtomicOrdering::Relaxed)
            {
                edges.push(w);
                self.record(area2, edges, local);
                edges.pop();
            }
            return;
        }
        let rest = remaining - 1;
        let closing_lb = if rest + 1 >= 3 { self.lb2[rest + 1] } else { 0 };
        let last_dir = self.vecs[last].1;
        for (off, &(v, dir)) in self.vecs[last + 1..].iter().enumerate() {
            if dir == last_dir {
                continue;
            }
            if !self.tick(local) {
                return;
            }
            let np = add(pos, v);
            let a = area2 + cross(pos, v);
            if a + closing_lb > self.best.load(AtomicOrdering::Relaxed) {
                continue;
            }
            if np[0].abs() > self.bound * rest as i64 || np[1].abs() > self.bound * rest as i64 {
                continue;
            }
            let back = [-np[0], -np[1]];
            if back == [0, 0] {
                continue;
            }
            // once past angle π the remaining edges lie in a cone narrower
            // than a half-plane, so their sum must lie in it too
            if half(v) == 1 && (half(back) == 0 || cross(v, back) <= 0) {
                continue;
            }
            edges.push(v);
            self.dfs(last + 1 + off, np, a, edges, local);
            edges.pop();
        }
    }
}

/// Minimum area convex lattice `k`-gon by branch and bound over angle-sorted
/// edge vectors with coordinates at most `edge_bound`, `lower2[j]` holding
/// lower bounds on twice the minimum area of `j`-gons for `3 ≤ j < k`.
fn search_min_area(k: usize, edge_bound: i64, lower2: &[i64], budget: u64) -> Result<(i64, LatticePolygon, u64)> {
    let vecs = angle_sorted_vectors(edge_bound, edge_bound);
    let search = Search {
        k,
        bound: edge_bound,
        vecs: &vecs,
        lb2: lower2,
        best: AtomicI64::new(i64::MAX),
        nodes: AtomicU64::new(0),
        budget,
        exhausted: AtomicBool::new(false),
    };
    // rotating by a quarter turn brings the first edge into [0, π/2)
    let firsts: Vec<usize> = (0..vecs.len())
        .filter(|&i| {
            let v = vecs[i].0;
            v[0] > 0 && v[1] >= 0
        })
        .collect();
    let results = Mutex::new(Vec::new());
    firsts.par_iter().for_each(|&i| {
        let mut local = Local::default();
        let mut edges = vec![vecs[i].0];
        search.dfs(i, vecs[i].0, 0, &mut edges, &mut local);
        search.nodes.fetch_add(local.pending_nodes, AtomicOrdering::Relaxed);
        if let Some(b) = local.best {
            results.lock().unwrap().push(b);
        }
    });
    let nodes = search.nodes.load(AtomicOrdering::Relaxed);
    let best = results
        .into_inner()
        .unwrap()
        .into_iter()
        .min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    if search.exhausted.load(AtomicOrdering::Relaxed) {
        return Err(Error::SearchLimit {
            budget,
            best: best.map(|b| format!("area {}", crate::format_ratio(&Rational64::new(b.0, 2)))),
        });
    }
    match best {
        Some((a, _, p)) => Ok((a, p.canonical_position(), nodes)),
        None => Err(Error::Construction(format!(
            "no convex {k}-gon with edge coordinates bounded by {edge_bound}"
        ))),
    }
}

/// `A(k)`, the least area of a convex lattice `k`-gon, with a witness in
/// canonical position.
pub fn min_area_convex_kgon(k: usize, budget: u64) -> Result<MinAreaResult> {
    min_area_table(k, budget).map(|mut t| t.pop().unwrap())
}

/// `A(3), …, A(k_max)`; each entry's search uses the earlier ones as lower
/// bounds.
pub fn min_area_table(k_max: usize, budget: u64) -> Result<Vec<MinAreaResult>> {
    if !(3..=MAX_K).contains(&k_max) {
        return invalid(format!("k must lie in 3..={MAX_K}, got {k_max}"));
    }
    let mut lower2 = vec![0i64; k_max + 1];
    let mut out = Vec::new();
    for k in 3..=k_max {
        let bound = default_edge_bound(k);
        let (area2, witness, nodes) = search_min_area(k, bound, &lower2, budget)?;
        let exact2 = certified_min_area2(k, area2);
        lower2[k] = exact2;
        out.push(MinAreaResult {
            k,
            area: Rational64::new(area2, 2),
            witness,
            certified: exact2 == area2,
            lower_bound: Rational64::new(exact2, 2),
            edge_bound: bound,
            nodes,
        });
    }
    Ok(out)
}

/// `i(k) = A(k) + (2 − k)/2`, the least number of interior points of a
/// convex lattice `k`-gon, cross-checked against the witness.
pub fn i_of_k(k: usize, budget: u64) -> Result<i64> {
    interior_from(&min_area_convex_kgon(k, budget)?)
}

pub fn interior_from(r: &MinAreaResult) -> Result<i64> {
    let i = r.area + Rational64::new(2 - r.k as i64, 2);
    if !i.is_integer() {
        return Err(Error::CheckFailed(format!("A({}) + (2−k)/2 = {i} is not an integer", r.k)));
    }
    let counted = pick_counts(&r.witness);
    if counted.interior != i.to_integer() || counted.boundary != r.k as i64 {
        return Err(Error::CheckFailed(format!(
            "witness for k = {} has {} interior and {} boundary points, expected {i} and {}",
            r.k, counted.interior, counted.boundary, r.k
        )));
    }
    Ok(i.to_integer())
}

/// `1/(8π²) < A/k³`, decided exactly: with `π > 314159/100000` it suffices
/// that `8·(314159/100000)²·A > k³`.
pub fn rabinowitz_lower_bound_holds(area: Rational64, k: usize) -> bool {
    let pi_num: i128 = 314_159;
    let pi_den: i128 = 100_000;
    let lhs = 8 * pi_num * pi_num * *area.numer() as i128;
    let rhs = (k as i128).pow(3) * pi_den * pi_den * *area.denom() as i128;
    lhs > rhs
}

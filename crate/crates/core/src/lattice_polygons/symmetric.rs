use std::sync::atomic::{AtomicBool, AtomicI64, AtomicU64, Ordering as AtomicOrdering};
use std::sync::Mutex;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use super::min_area::angle_sorted_vectors;
use super::polygon::{add, cross, half, signed_area2, LatticePolygon, Point};
use crate::error::{invalid, Error, Result};

pub const MAX_TWO_M: usize = 16;

/// Minimizer of the symmetric interior count. For `2m = 2` this is the
/// segment `[−v, v]`, whose relative interior contains only the origin.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum SymmetricWitness {
    Segment([Point; 2]),
    Polygon(LatticePolygon),
}

impl SymmetricWitness {
    pub fn vertices(&self) -> Vec<Point> {
        match self {
            Self::Segment(s) => s.to_vec(),
            Self::Polygon(p) => p.vertices().to_vec(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetricResult {
    pub two_m: usize,
    pub interior: i64,
    pub witness: SymmetricWitness,
    pub certified: bool,
    pub nodes: u64,
}

/// Image under the 8 symmetries of the square lattice (all fixing the
/// origin) with the least vertex list, listed from its least vertex.
fn canonical_about_origin(p: &LatticePolygon) -> Vec<Point> {
    let maps: [fn(Point) -> Point; 8] = [
        |p| [p[0], p[1]],
        |p| [-p[1], p[0]],
        |p| [-p[0], -p[1]],
        |p| [p[1], -p[0]],
        |p| [-p[0], p[1]],
        |p| [p[0], -p[1]],
        |p| [p[1], p[0]],
        |p| [-p[1], -p[0]],
    ];
    maps.iter()
        .map(|f| {
            let mut v: Vec<Point> = p.vertices().iter().map(|q| f(*q)).collect();
            if signed_area2(&v) < 0 {
                v.reverse();
            }
            let start = (0..v.len()).min_by_key(|i| v[*i]).unwrap();
            v.rotate_left(start);
            v
        })
        .min()
        .unwrap()
}

type Key = (i64, Vec<Point>);

struct Search<'a> {
    m: usize,
    gens: &'a [(Point, u32)],
    best: AtomicI64,
    nodes: AtomicU64,
    budget: u64,
    exhausted: AtomicBool,
}

#[derive(Default)]
struct Local {
    best: Option<(i64, Key, Vec<Point>)>,
    pending: u64,
}

impl Search<'_> {
    fn tick(&self, local: &mut Local) -> bool {
        local.pending += 1;
        if local.pending >= 4096 {
            let total = self.nodes.fetch_add(local.pending, AtomicOrdering::Relaxed) + local.pending;
            local.pending = 0;
            if total > self.budget {
                self.exhausted.store(true, AtomicOrdering::Relaxed);
            }
        }
        !self.exhausted.load(AtomicOrdering::Relaxed)
    }

    fn polygon(gens: &[Point]) -> LatticePolygon {
        let s = gens.iter().fold([0, 0], |a, g| add(a, *g));
        let mut v = Vec::with_capacity(2 * gens.len());
        let mut p = [-s[0] / 2, -s[1] / 2];
        for g in gens.iter().chain(gens.iter().map(|g| [-g[0], -g[1]]).collect::<Vec<_>>().iter()) {
            v.push(p);
            p = add(p, *g);
        }
        LatticePolygon::new(v).expect("symmetric generators form a convex polygon")
    }

    /// `area` is the exact area `Σ_{i<j} det(u_i, u_j)`, `g` the sum of
    /// generator gcds; the interior count is `area − g + 1`.
    fn dfs(&self, last: usize, sum: Point, area: i64, g: i64, chosen: &mut Vec<Point>, local: &mut Local) {
        let s = chosen.len();
        if s == self.m {
            if sum[0] % 2 != 0 || sum[1] % 2 != 0 {
                return;
            }
            let interior = area - g + 1;
            if interior > self.best.load(AtomicOrdering::Relaxed) {
                return;
            }
            self.best.fetch_min(interior, AtomicOrdering::Relaxed);
            let poly = Self::polygon(chosen);
            let key = (
                poly.edges().iter().map(|e| e[0] * e[0] + e[1] * e[1]).sum::<i64>(),
                canonical_about_origin(&poly),
            );
            let better = match &local.best {
                None => true,
                Some((i, k, _)) => interior < *i || (interior == *i && key < *k),
            };
            if better {
                let verts = key.1.clone();
                local.best = Some((interior, key, verts));
            }
            return;
        }
        let last_dir = self.gens[last].1;
        for (off, &(u, dir)) in self.gens[last + 1..].iter().enumerate() {
            if dir == last_dir {
                continue;
            }
            if !self.tick(local) {
                return;
            }
            let gu = u[0].gcd(&u[1]);
            let na = area + cross(sum, u);
            let ng = g + gu;
            // each later generator raises the interior count by at least
            // (current gcd sum) − 1
            let rest = (self.m - s - 1) as i64;
            let lb = na - ng + 1 + rest * (ng - 1) + rest * (rest - 1) / 2;
            if lb > self.best.load(AtomicOrdering::Relaxed) {
                continue;
            }
            chosen.push(u);
            self.dfs(last + 1 + off, add(sum, u), na, ng, chosen, local);
            chosen.pop();
        }
    }
}

/// Least interior count of a centrally symmetric `m`-generator polygon with
/// generators from `gens` (directions in `[0, π)`, angle sorted). With
/// `quarter_turn` the first generator is restricted to `[0, π/2)`.
fn search(
    m: usize,
    gens: &[(Point, u32)],
    quarter_turn: bool,
    initial_best: i64,
    budget: u64,
) -> Result<(Option<(i64, Vec<Point>)>, u64)> {
    let s = Search {
        m,
        gens,
        best: AtomicI64::new(initial_best),
        nodes: AtomicU64::new(0),
        budget,
        exhausted: AtomicBool::new(false),
    };
    let firsts: Vec<usize> = (0..gens.len())
        .filter(|&i| !quarter_turn || (gens[i].0[0] > 0 && gens[i].0[1] >= 0))
        .collect();
    let found = Mutex::new(Vec::new());
    firsts.par_iter().for_each(|&i| {
        let mut local = Local::default();
        let u = gens[i].0;
        let mut chosen = vec![u];
        s.dfs(i, u, 0, u[0].gcd(&u[1]), &mut chosen, &mut local);
        s.nodes.fetch_add(local.pending, AtomicOrdering::Relaxed);
        if let Some(b) = local.best {
            found.lock().unwrap().push(b);
        }
    });
    let nodes = s.nodes.load(AtomicOrdering::Relaxed);
    let best = found
        .into_inner()
        .unwrap()
        .into_iter()
        .min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)))
        .map(|(i, _, v)| (i, v));
    if s.exhausted.load(AtomicOrdering::Relaxed) {
        return Err(Error::SearchLimit {
            budget,
            best: best.map(|b| format!("interior count {}", b.0)),
        });
    }
    Ok((best, nodes))
}

fn half_plane(vecs: Vec<(Point, u32)>) -> Vec<(Point, u32)> {
    vecs.into_iter().filter(|(v, _)| half(*v) == 0).collect()
}

/// `i₀(2m)`: the least number of interior lattice points of a convex lattice
/// `2m`-gon centrally symmetric about the origin.
///
/// Such a polygon has edges `u_1, …, u_m, −u_1, …, −u_m` with the `u_j` of
/// distinct directions in `[0, π)` and `Σu_j ∈ 2Z²`; its area is
/// `Σ_{i<j} det(u_i, u_j)` and its boundary count `2·Σ gcd(u_j)`.
///
/// The search uses generator coordinates up to 6 and is then certified: by
/// van der Corput's theorem a symmetric body with `i` interior points has
/// area at most `2(i + 1)`, so its lattice width `w` (even, at least
/// `m − 1`) and sheared `x`-extent are bounded as in the `A(k)` case, and
/// the generator box they imply is searched for a strictly better polygon.
pub fn min_interior_symmetric(two_m: usize, budget: u64) -> Result<SymmetricResult> {
    if two_m % 2 != 0 || two_m < 2 || two_m > MAX_TWO_M {
        return invalid(format!("2m must be an even number in 2..={MAX_TWO_M}, got {two_m}"));
    }
    let m = two_m / 2;
    if m == 1 {
        return Ok(SymmetricResult {
            two_m,
            interior: 1,
            witness: SymmetricWitness::Segment([[-1, 0], [1, 0]]),
            certified: true,
            nodes: 0,
        });
    }
    let gens = half_plane(angle_sorted_vectors(6, 6));
    let (best, mut nodes) = search(m, &gens, true, i64::MAX, budget)?;
    let (interior, verts) = best.ok_or_else(|| Error::Construction(format!("no symmetric {two_m}-gon found")))?;

    let max_area = 2 * (interior + 1);
    let mut certified = true;
    let mut w = (m as i64 - 1).max(2);
    if w % 2 == 1 {
        w += 1;
    }
    while 3 * w * w <= 8 * max_area {
        let x = w - 1 + Integer::div_floor(&(2 * max_area), &w);
        let box_gens = half_plane(angle_sorted_vectors(x, w));
        let (better, n) = search(m, &box_gens, false, interior - 1, budget)?;
        nodes += n;
        if better.is_some() {
            certified = false;
        }
        w += 2;
    }
    Ok(SymmetricResult {
        two_m,
        interior,
        witness: SymmetricWitness::Polygon(LatticePolygon::new(verts)?),
        certified,
        nodes,
    })
}

/// `f(m) = (i₀(2m) + 1)/2`.
pub fn f_of_m(m: usize, budget: u64) -> Result<i64> {
    if !(1..=MAX_TWO_M / 2).contains(&m) {
        return invalid(format!("m must lie in 1..={}, got {m}", MAX_TWO_M / 2));
    }
    let r = min_interior_symmetric(2 * m, budget)?;
    if r.interior % 2 != 1 {
        return Err(Error::CheckFailed(format!("i₀({}) = {} is even", 2 * m, r.interior)));
    }
    Ok((r.interior + 1) / 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_polygons::{pick_counts_checked, DEFAULT_BUDGET};

    #[test]
    fn small_cases() {
        let two = min_interior_symmetric(2, DEFAULT_BUDGET).unwrap();
        assert_eq!(two.interior, 1);
        let four = min_interior_symmetric(4, DEFAULT_BUDGET).unwrap();
        assert_eq!(four.interior, 1);
        assert!(four.certified);
        let mut v = four.witness.vertices();
        v.sort_unstable();
        assert_eq!(v, vec![[-1, 0], [0, -1], [0, 1], [1, 0]]);
        let six = min_interior_symmetric(6, DEFAULT_BUDGET).unwrap();
        assert_eq!(six.interior, 1);
        if let SymmetricWitness::Polygon(p) = &six.witness {
            assert!(p.centrally_symmetric_about_origin());
            assert_eq!(pick_counts_checked(p).unwrap().interior, 1);
            let mut v = p.vertices().to_vec();
            v.sort_unstable();
            let mut hex = vec![[1, 0], [1, 1], [0, 1], [-1, 0], [-1, -1], [0, -1]];
            hex.sort_unstable();
            // the hexagon up to a lattice reflection
            let mut mirrored: Vec<Point> = hex.iter().map(|p| [p[0], -p[1]]).collect();
            mirrored.sort_unstable();
            assert!(v == hex || v == mirrored);
        } else {
            panic!("expected a polygon");
        }
    }

    #[test]
    fn f_small() {
        assert_eq!(f_of_m(1, DEFAULT_BUDGET).unwrap(), 1);
        assert_eq!(f_of_m(2, DEFAULT_BUDGET).unwrap(), 1);
        assert_eq!(f_of_m(3, DEFAULT_BUDGET).unwrap(), 1);
    }

    #[test]
    fn rejects_odd_and_large() {
        assert!(min_interior_symmetric(5, 10).is_err());
        assert!(min_interior_symmetric(18, 10).is_err());
        assert!(f_of_m(0, 10).is_err());
    }
}

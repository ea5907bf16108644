use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;
use serde::Serialize;

use super::graph::{to_scalar, ToralGeodesicGraph};
use crate::error::{invalid, Error, Result};
use crate::norms::IntegralClass;
use crate::scalar::Scalar;

/// A closed walk in the graph: edge indices with traversal direction `±1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Cycle {
    pub steps: Vec<(usize, i8)>,
}

impl Cycle {
    pub fn from_oriented(oriented: &[usize]) -> Self {
        Self {
            steps: oriented
                .iter()
                .map(|o| (o / 2, if o % 2 == 0 { 1 } else { -1 }))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// No step is immediately undone by the next, cyclically.
    pub fn is_cyclically_reduced(&self) -> bool {
        let n = self.steps.len();
        (0..n).all(|i| {
            let (e, s) = self.steps[i];
            let (f, t) = self.steps[(i + 1) % n];
            !(e == f && s == -t) || n == 1
        })
    }
}

/// Total ordering wrapper for floating point distances in heaps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Dist<S>(pub S);

impl<S: Scalar> Eq for Dist<S> {}

impl<S: Scalar> PartialOrd for Dist<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: Scalar> Ord for Dist<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.partial_cmp(&other.0).unwrap_or(Ordering::Equal)
    }
}

/// Sub-lattice of `Z²` in Hermite normal form: generated by `(x1, y1)` and
/// `(0, y2)` with `x1, y2 ≥ 0`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Sublattice {
    x1: i64,
    y1: i64,
    y2: i64,
}

impl Sublattice {
    pub fn add(&mut self, v: [i64; 2]) {
        let [x, y] = v;
        if x == 0 {
            self.y2 = self.y2.gcd(&y);
        } else if self.x1 == 0 {
            let old = (self.x1, self.y1);
            self.x1 = x;
            self.y1 = y;
            if old.1 != 0 {
                self.y2 = self.y2.gcd(&old.1);
            }
        } else {
            let e = self.x1.extended_gcd(&x);
            let g = e.gcd;
            let ny1 = e.x * self.y1 + e.y * y;
            // the combination killing the first coordinate
            let rest = (x / g) * self.y1 - (self.x1 / g) * y;
            self.x1 = g;
            self.y1 = ny1;
            self.y2 = self.y2.gcd(&rest);
        }
        if self.x1 < 0 {
            self.x1 = -self.x1;
            self.y1 = -self.y1;
        }
        if self.y2 != 0 {
            self.y1 = self.y1.mod_floor(&self.y2);
        }
    }

    pub fn contains(&self, h: [i64; 2]) -> bool {
        let divides = |d: i64, r: i64| if d == 0 { r == 0 } else { r % d == 0 };
        if self.x1 == 0 {
            h[0] == 0 && divides(self.y2, h[1])
        } else {
            h[0] % self.x1 == 0 && divides(self.y2, h[1] - (h[0] / self.x1) * self.y1)
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct MinimalCycle<S> {
    pub class: IntegralClass,
    pub cycle: Cycle,
    pub length: S,
    /// `length = Σ coefficients[i]·ℓ_i`, exactly.
    #[serde(serialize_with = "serialize_ratios")]
    pub coefficients: Vec<Rational64>,
}

fn serialize_ratios<Ser: serde::Serializer>(v: &[Rational64], s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
    s.collect_seq(v.iter().map(crate::format_ratio))
}

impl<S: Scalar> ToralGeodesicGraph<S> {
    fn oriented(&self, o: usize) -> (usize, usize) {
        let e = &self.edges[o / 2];
        if o % 2 == 0 {
            (e.tail, e.head)
        } else {
            (e.head, e.tail)
        }
    }

    /// Integer translation of the lift of an oriented edge between the
    /// representatives of its endpoints.
    pub(crate) fn oriented_crossing(&self, o: usize) -> [i64; 2] {
        let c = self.edges[o / 2].crossing;
        if o % 2 == 0 {
            c
        } else {
            [-c[0], -c[1]]
        }
    }

    /// Displacement scaled by the common denominator.
    pub(crate) fn oriented_scaled_displacement(&self, o: usize) -> [i64; 2] {
        let d = self.edges[o / 2].displacement;
        let m = self.denom;
        let s = [(d[0] * m).to_integer(), (d[1] * m).to_integer()];
        if o % 2 == 0 {
            s
        } else {
            [-s[0], -s[1]]
        }
    }

    /// Signed crossings of the lift of an oriented edge with the lines
    /// `x = x₀ + n` and `y = x₀ + n`, `x₀ = 1/(2M)`, which avoid every vertex.
    pub(crate) fn oriented_intersections(&self, o: usize) -> [i64; 2] {
        let e = &self.edges[o / 2];
        let x0 = Rational64::new(1, 2 * self.denom);
        let t = self.vertices[e.tail];
        let count = |start: Rational64, d: Rational64| ((start + d - x0).floor() - (start - x0).floor()).to_integer();
        let c = [count(t[0], e.displacement[0]), count(t[1], e.displacement[1])];
        if o % 2 == 0 {
            c
        } else {
            [-c[0], -c[1]]
        }
    }

    fn oriented_steps(&self, cycle: &Cycle) -> Result<Vec<usize>> {
        let os: Vec<usize> = cycle
            .steps
            .iter()
            .map(|&(e, s)| if s >= 0 { 2 * e } else { 2 * e + 1 })
            .collect();
        if os.is_empty() || os.iter().any(|o| o / 2 >= self.edges.len()) {
            return invalid("cycle is empty or names an unknown edge");
        }
        for i in 0..os.len() {
            if self.oriented(os[i]).1 != self.oriented(os[(i + 1) % os.len()]).0 {
                return invalid(format!("cycle is not closed at step {i}"));
            }
        }
        Ok(os)
    }

    /// Homology class as the sum of lift displacements (asserted integral).
    pub fn cycle_homology(&self, cycle: &Cycle) -> Result<IntegralClass> {
        let os = self.oriented_steps(cycle)?;
        let mut s = [Rational64::zero(), Rational64::zero()];
        for o in os {
            let sign = Rational64::from_integer(if o % 2 == 0 { 1 } else { -1 });
            let d = self.edges[o / 2].displacement;
            s[0] += sign * d[0];
            s[1] += sign * d[1];
        }
        if !s[0].is_integer() || !s[1].is_integer() {
            return Err(Error::CheckFailed(format!("displacement sum ({}, {}) is not integral", s[0], s[1])));
        }
        Ok(IntegralClass::new(s[0].to_integer(), s[1].to_integer()))
    }

    /// Homology class from algebraic intersection numbers with a vertical
    /// and a horizontal circle.
    pub fn intersection_homology(&self, cycle: &Cycle) -> Result<IntegralClass> {
        let os = self.oriented_steps(cycle)?;
        let s = os.iter().fold([0, 0], |acc, o| {
            let c = self.oriented_intersections(*o);
            [acc[0] + c[0], acc[1] + c[1]]
        });
        Ok(IntegralClass::new(s[0], s[1]))
    }

    pub fn cycle_length(&self, cycle: &Cycle) -> S {
        cycle.steps.iter().map(|(e, _)| self.edges[*e].length).sum()
    }

    /// Exact coefficients `c_i` with `length = Σ c_i·ℓ_i`.
    pub fn cycle_coefficients(&self, cycle: &Cycle) -> Vec<Rational64> {
        let mut c = vec![Rational64::zero(); self.classes.len()];
        for (e, _) in &cycle.steps {
            c[self.edges[*e].class] += self.edges[*e].q;
        }
        c
    }

    /// Lattice of homology classes realized by closed walks.
    pub fn reachable_lattice(&self) -> Sublattice {
        let n = self.vertices.len();
        let mut pos: Vec<Option<[i64; 2]>> = vec![None; n];
        // positions in units of 1/M relative to the lift of vertex 0
        pos[0] = Some([0, 0]);
        let adj = self.adjacency();
        let mut stack = vec![0usize];
        let mut lattice = Sublattice::default();
        let m = self.denom;
        while let Some(v) = stack.pop() {
            let pv = pos[v].unwrap();
            for &o in &adj[v] {
                let (_, w) = self.oriented(o);
                let d = self.oriented_scaled_displacement(o);
                let pw = [pv[0] + d[0], pv[1] + d[1]];
                match pos[w] {
                    None => {
                        pos[w] = Some(pw);
                        stack.push(w);
                    }
                    Some(existing) => {
                        let diff = [pw[0] - existing[0], pw[1] - existing[1]];
                        lattice.add([diff[0] / m, diff[1] / m]);
                    }
                }
            }
        }
        lattice
    }

    /// Window (in cells of the cover) certifying any cycle of length at most
    /// `bound`: its lift stays within `ρ·bound` of its start in the sup norm.
    pub(crate) fn certified_window(&self, bound: S) -> i64 {
        let r = (self.slope_bound() * bound * (S::one() + S::lit(1e-9))).floor();
        r.to_i64().unwrap_or(i64::MAX / 4) + 1
    }

    /// Shortest closed walk in class `h`, by Dijkstra in the `Z²`-cover
    /// restricted to cells `|z|_∞ ≤ window`, minimized over start vertices.
    /// `Ok(None)` when `h` is not realized by any closed walk.
    pub fn minimal_cycle(&self, h: IntegralClass, window: i64) -> Result<Option<MinimalCycle<S>>> {
        if window < 1 {
            return invalid("window must be positive");
        }
        if !self.reachable_lattice().contains([h.a, h.b]) {
            return Ok(None);
        }
        if h.is_trivial() {
            return invalid("the trivial class is represented by the constant loop");
        }
        if h.linf() > window {
            return Err(Error::WindowTooSmall {
                window,
                required: h.linf() + 1,
            });
        }
        let adj = self.adjacency();
        let side = (2 * window + 1) as usize;
        let cell_index = |z: [i64; 2]| -> Option<usize> {
            if z[0].abs() > window || z[1].abs() > window {
                None
            } else {
                Some((z[1] + window) as usize * side + (z[0] + window) as usize)
            }
        };
        let n = self.vertices.len();
        let mut best: Option<(S, Vec<usize>)> = None;
        for start in 0..n {
            let target = (start, cell_index([h.a, h.b]).unwrap());
            let mut dist: HashMap<(usize, usize), (S, Option<(usize, usize, usize)>)> = HashMap::new();
            let origin = (start, cell_index([0, 0]).unwrap());
            dist.insert(origin, (S::zero(), None));
            let mut heap = BinaryHeap::new();
            heap.push(Reverse((Dist(S::zero()), origin.0, origin.1, [0i64, 0i64])));
            while let Some(Reverse((Dist(d), v, ci, z))) = heap.pop() {
                if dist.get(&(v, ci)).map(|x| x.0 < d).unwrap_or(false) {
                    continue;
                }
                if let Some((b, _)) = &best {
                    if d >= *b {
                        break;
                    }
                }
                if (v, ci) == target {
                    let mut path = Vec::new();
                    let mut cur = (v, ci);
                    while let Some((_, Some((pv, pc, o)))) = dist.get(&cur) {
                        path.push(*o);
                        cur = (*pv, *pc);
                    }
                    path.reverse();
                    best = Some((d, path));
                    break;
                }
                for &o in &adj[v] {
                    let (_, w) = self.oriented(o);
                    let c = self.oriented_crossing(o);
                    let nz = [z[0] + c[0], z[1] + c[1]];
                    let Some(nci) = cell_index(nz) else { continue };
                    let nd = d + self.edges[o / 2].length;
                    let better = dist.get(&(w, nci)).map(|x| nd < x.0).unwrap_or(true);
                    if better {
                        dist.insert((w, nci), (nd, Some((v, ci, o))));
                        heap.push(Reverse((Dist(nd), w, nci, nz)));
                    }
                }
            }
        }
        match best {
            None => Err(Error::WindowTooSmall {
                window,
                required: window + 1,
            }),
            Some((length, path)) => {
                let required = self.certified_window(length);
                if window < required {
                    return Err(Error::WindowTooSmall { window, required });
                }
                let cycle = Cycle::from_oriented(&path);
                let coefficients = self.cycle_coefficients(&cycle);
                Ok(Some(MinimalCycle {
                    class: h,
                    cycle,
                    length,
                    coefficients,
                }))
            }
        }
    }

    /// [`Self::minimal_cycle`] with the window grown until certified.
    pub fn minimal_cycle_auto(&self, h: IntegralClass) -> Result<Option<MinimalCycle<S>>> {
        let mut window = (h.linf() + 1).max(2);
        loop {
            match self.minimal_cycle(h, window) {
                Err(Error::WindowTooSmall { required, .. }) => {
                    window = required.max(2 * window);
                    if window > 1 << 12 {
                        return Err(Error::WindowTooSmall { window, required });
                    }
                }
                other => return other,
            }
        }
    }
}

/// Exact length comparison helper: `Σ c_i ℓ_i` as a scalar.
pub fn coefficient_length<S: Scalar>(graph: &ToralGeodesicGraph<S>, coefficients: &[Rational64]) -> S {
    coefficients
        .iter()
        .zip(&graph.classes)
        .map(|(c, cl)| to_scalar::<S>(*c) * cl.length)
        .sum()
}

use std::cmp::Ordering;

use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub type Point = [i64; 2];

/// A convex lattice polygon with vertices listed counter-clockwise; no three
/// consecutive vertices are collinear.
///
/// Serialized as its vertex list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct LatticePolygon {
    vertices: Vec<Point>,
}

impl TryFrom<Vec<Point>> for LatticePolygon {
    type Error = Error;
    fn try_from(v: Vec<Point>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<LatticePolygon> for Vec<Point> {
    fn from(p: LatticePolygon) -> Self {
        p.vertices
    }
}

pub(crate) fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

pub(crate) fn add(a: Point, b: Point) -> Point {
    [a[0] + b[0], a[1] + b[1]]
}

pub(crate) fn cross(a: Point, b: Point) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

/// 0 for directions with angle in `[0, π)`, 1 for `[π, 2π)`.
pub(crate) fn half(v: Point) -> u8 {
    if v[1] > 0 || (v[1] == 0 && v[0] > 0) {
        0
    } else {
        1
    }
}

/// Compares the polar angles in `[0, 2π)` of two nonzero vectors.
pub(crate) fn angle_cmp(u: Point, v: Point) -> Ordering {
    half(u).cmp(&half(v)).then_with(|| 0.cmp(&cross(u, v)))
}

impl LatticePolygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return invalid(format!("a polygon needs at least 3 vertices, got {n}"));
        }
        let mut transitions = 0;
        for i in 0..n {
            let e1 = sub(vertices[(i + 1) % n], vertices[i]);
            let e2 = sub(vertices[(i + 2) % n], vertices[(i + 1) % n]);
            if e1 == [0, 0] {
                return invalid("polygon has a repeated vertex");
            }
            if cross(e1, e2) <= 0 {
                return invalid(format!(
                    "polygon is not strictly convex counter-clockwise at vertex {:?}",
                    vertices[(i + 1) % n]
                ));
            }
            if half(e1) != half(e2) {
                transitions += 1;
            }
        }
        // a convex closed walk turning left at every corner is simple iff its
        // edge directions wind exactly once
        if transitions != 2 {
            return invalid("polygon boundary winds more than once");
        }
        Ok(Self { vertices })
    }

    /// Accepts either orientation.
    pub fn from_any_orientation(mut vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() >= 3 && signed_area2(&vertices) < 0 {
            vertices.reverse();
        }
        Self::new(vertices)
    }

    /// Builds the polygon obtained by walking the given edge vectors from
    /// `start`.
    pub fn from_edges(start: Point, edges: &[Point]) -> Result<Self> {
        let mut v = Vec::with_capacity(edges.len());
        let mut p = start;
        for e in edges {
            v.push(p);
            p = add(p, *e);
        }
        if p != start {
            return invalid("edge vectors do not close up");
        }
        Self::new(v)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> Vec<Point> {
        let n = self.vertices.len();
        (0..n).map(|i| sub(self.vertices[(i + 1) % n], self.vertices[i])).collect()
    }

    /// Twice the area, an integer.
    pub fn area2(&self) -> i64 {
        signed_area2(&self.vertices)
    }

    pub fn area(&self) -> Rational64 {
        Rational64::new(self.area2(), 2)
    }

    pub fn boundary_count(&self) -> i64 {
        self.edges().iter().map(|e| e[0].gcd(&e[1])).sum()
    }

    pub fn centrally_symmetric_about_origin(&self) -> bool {
        let mut a = self.vertices.clone();
        let mut b: Vec<Point> = self.vertices.iter().map(|p| [-p[0], -p[1]]).collect();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }

    /// `1` strictly inside, `0` on the boundary, `-1` outside.
    pub fn locate(&self, p: Point) -> i8 {
        let n = self.vertices.len();
        let mut on_edge = false;
        for i in 0..n {
            let a = self.vertices[i];
            let c = cross(sub(self.vertices[(i + 1) % n], a), sub(p, a));
            if c < 0 {
                return -1;
            }
            if c == 0 {
                on_edge = true;
            }
        }
        if on_edge {
            0
        } else {
            1
        }
    }

    pub fn bounding_box(&self) -> (Point, Point) {
        let xs = self.vertices.iter().map(|p| p[0]);
        let ys = self.vertices.iter().map(|p| p[1]);
        (
            [xs.clone().min().unwrap(), ys.clone().min().unwrap()],
            [xs.max().unwrap(), ys.max().unwrap()],
        )
    }

    pub fn translated(&self, t: Point) -> Self {
        Self {
            vertices: self.vertices.iter().map(|p| add(*p, t)).collect(),
        }
    }

    /// Representative of the polygon under lattice translations and the 8
    /// symmetries of the square lattice: bounding box at the origin, vertex
    /// list starting at its lexicographically least vertex, and the
    /// lexicographically least such list.
    pub fn canonical_position(&self) -> Self {
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
                let mut v: Vec<Point> = self.vertices.iter().map(|p| f(*p)).collect();
                if signed_area2(&v) < 0 {
                    v.reverse();
                }
                let min_x = v.iter().map(|p| p[0]).min().unwrap();
                let min_y = v.iter().map(|p| p[1]).min().unwrap();
                for p in v.iter_mut() {
                    *p = [p[0] - min_x, p[1] - min_y];
                }
                let start = (0..v.len()).min_by_key(|i| v[*i]).unwrap();
                v.rotate_left(start);
                v
            })
            .min()
            .map(|vertices| Self { vertices })
            .unwrap()
    }

    /// Tie-break key among optimal polygons: sum of squared edge lengths,
    /// then the canonical vertex list.
    pub fn witness_key(&self) -> (i64, Vec<Point>) {
        let sq: i64 = self.edges().iter().map(|e| e[0] * e[0] + e[1] * e[1]).sum();
        (sq, self.canonical_position().vertices)
    }
}

pub(crate) fn signed_area2(v: &[Point]) -> i64 {
    let n = v.len();
    (0..n).map(|i| cross(v[i], v[(i + 1) % n])).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PickCounts {
    #[serde(serialize_with = "crate::rational::serde_ratio::serialize")]
    pub area: Rational64,
    pub interior: i64,
    pub boundary: i64,
}

/// Area by the shoelace formula, boundary points by edge gcds, interior
/// points by Pick's identity.
pub fn pick_counts(p: &LatticePolygon) -> PickCounts {
    let area2 = p.area2();
    let boundary = p.boundary_count();
    // 2i = 2A − b + 2
    let interior = (area2 - boundary + 2) / 2;
    PickCounts {
        area: Rational64::new(area2, 2),
        interior,
        boundary,
    }
}

/// Interior and boundary counts by testing every point of the bounding box.
pub fn scan_counts(p: &LatticePolygon) -> (i64, i64) {
    let (lo, hi) = p.bounding_box();
    let mut interior = 0;
    let mut boundary = 0;
    for x in lo[0]..=hi[0] {
        for y in lo[1]..=hi[1] {
            match p.locate([x, y]) {
                1 => interior += 1,
                0 => boundary += 1,
                _ => {}
            }
        }
    }
    (interior, boundary)
}

/// [`pick_counts`] verified against [`scan_counts`].
pub fn pick_counts_checked(p: &LatticePolygon) -> Result<PickCounts> {
    let c = pick_counts(p);
    let (i, b) = scan_counts(p);
    if (i, b) != (c.interior, c.boundary) {
        return Err(Error::CheckFailed(format!(
            "Pick counts (i={}, b={}) disagree with lattice scan (i={i}, b={b}) for {:?}",
            c.interior,
            c.boundary,
            p.vertices()
        )));
    }
    Ok(c)
}

/// Convex hull (monotone chain), dropping collinear points. `None` when the
/// points are collinear or fewer than three.
pub fn convex_hull(points: &[Point]) -> Option<LatticePolygon> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return None;
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(sub(lower[lower.len() - 1], lower[lower.len() - 2]), sub(*p, lower[lower.len() - 2])) <= 0 {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(sub(upper[upper.len() - 1], upper[upper.len() - 2]), sub(*p, upper[upper.len() - 2])) <= 0 {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    LatticePolygon::new(lower).ok()
}

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// An integral homology class `(a, b)` of the torus.
///
/// Serialized as the two-element array `[a, b]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct IntegralClass {
    pub a: i64,
    pub b: i64,
}

impl From<[i64; 2]> for IntegralClass {
    fn from(v: [i64; 2]) -> Self {
        Self::new(v[0], v[1])
    }
}

impl From<IntegralClass> for [i64; 2] {
    fn from(h: IntegralClass) -> Self {
        [h.a, h.b]
    }
}

impl IntegralClass {
    pub const fn new(a: i64, b: i64) -> Self {
        Self { a, b }
    }

    pub const fn trivial() -> Self {
        Self { a: 0, b: 0 }
    }

    pub fn is_trivial(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Unoriented representative of `±h`: `a > 0`, or `a = 0` and `b ≥ 0`.
    pub fn canonical(&self) -> Self {
        if self.a > 0 || (self.a == 0 && self.b >= 0) {
            *self
        } else {
            -*self
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical() == *self
    }

    /// `gcd(|a|, |b|)`, zero only for the trivial class.
    pub fn content(&self) -> i64 {
        self.a.gcd(&self.b)
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    /// Writes `h = n·p` with `p` primitive and `n ≥ 0`. The trivial class
    /// decomposes as `0·(0,0)`.
    pub fn decompose(&self) -> (i64, IntegralClass) {
        let n = self.content();
        if n == 0 {
            return (0, Self::trivial());
        }
        (n, Self::new(self.a / n, self.b / n))
    }

    pub fn scaled(&self, n: i64) -> Self {
        Self::new(self.a * n, self.b * n)
    }

    /// `a·b' − b·a'`
    pub fn det(&self, other: &Self) -> i64 {
        self.a * other.b - self.b * other.a
    }

    pub fn linf(&self) -> i64 {
        self.a.abs().max(self.b.abs())
    }

    pub fn to_vector<S: Scalar>(&self) -> [S; 2] {
        [S::from_i64_lossy(self.a), S::from_i64_lossy(self.b)]
    }

    /// Order used to break ties between classes of equal length:
    /// lexicographic on `(a, |b|)`, then `b ≥ 0` before `b < 0`. For
    /// canonical classes this lists `(1,1)` before its mirror `(1,-1)`.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        (self.a, self.b.abs(), self.b < 0).cmp(&(other.a, other.b.abs(), other.b < 0))
    }
}

impl Neg for IntegralClass {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b)
    }
}

impl Add for IntegralClass {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for IntegralClass {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a - o.a, self.b - o.b)
    }
}

impl fmt::Display for IntegralClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// All canonical classes with `max(|a|,|b|) ≤ radius`, trivial class first,
/// then in lexicographic order.
pub fn canonical_classes_in_box(radius: i64) -> Vec<IntegralClass> {
    let mut out = vec![IntegralClass::trivial()];
    for b in 1..=radius {
        out.push(IntegralClass::new(0, b));
    }
    for a in 1..=radius {
        for b in -radius..=radius {
            out.push(IntegralClass::new(a, b));
        }
    }
    out
}

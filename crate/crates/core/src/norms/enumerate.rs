use serde::Serialize;

use super::class::IntegralClass;
use super::spec::PlanarNorm;
use crate::error::{invalid, Result};
use crate::scalar::{approx_eq, Scalar};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct ClassLength<S> {
    pub class: IntegralClass,
    pub length: S,
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct ClassEnumeration<S> {
    pub entries: Vec<ClassLength<S>>,
    /// Box radius (in `max(|a|,|b|)`) that was scanned.
    pub radius: i64,
    /// Set when two non-parallel classes of equal length have a midpoint of
    /// the same length, i.e. the unit sphere contains a segment.
    pub flat_tie_warning: bool,
}

/// Sorts by length, then lexicographically among lengths that agree to
/// `rel_tol`.
fn sort_by_length_then_lex<S: Scalar>(entries: &mut [ClassLength<S>], rel_tol: f64) {
    entries.sort_by(|x, y| {
        x.length
            .partial_cmp(&y.length)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(x.class.lex_cmp(&y.class))
    });
    let mut start = 0;
    while start < entries.len() {
        let mut end = start + 1;
        while end < entries.len() && approx_eq(entries[end].length, entries[end - 1].length, rel_tol) {
            end += 1;
        }
        entries[start..end].sort_by(|x, y| x.class.lex_cmp(&y.class));
        start = end;
    }
}

/// The first `count` unoriented classes ordered by norm. `lower_bound` must
/// satisfy `‖x‖ ≥ lower_bound·|x|` for every `x`; it certifies that the
/// scanned box contains every class up to the last reported length.
pub fn enumerate_classes_with<S: Scalar, N: PlanarNorm<S> + ?Sized>(
    norm: &N,
    lower_bound: S,
    count: usize,
) -> Result<ClassEnumeration<S>> {
    if count == 0 {
        return invalid("count must be at least 1");
    }
    if !(lower_bound > S::zero()) {
        return invalid("norm lower bound must be positive");
    }
    let mut radius: i64 = 1;
    loop {
        let mut entries: Vec<ClassLength<S>> = super::class::canonical_classes_in_box(radius)
            .into_iter()
            .map(|class| ClassLength {
                length: norm.norm(class.to_vector()),
                class,
            })
            .collect();
        if entries.len() >= count {
            sort_by_length_then_lex(&mut entries, S::TIE_REL_TOL);
            let cutoff = entries[count - 1].length;
            // anything outside the box has Euclidean length > radius
            if cutoff < lower_bound * S::from_i64_lossy(radius) {
                entries.truncate(count);
                let flat_tie_warning = detect_flat_ties(norm, &entries);
                return Ok(ClassEnumeration {
                    entries,
                    radius,
                    flat_tie_warning,
                });
            }
        }
        if radius > 1 << 20 {
            return invalid("class enumeration radius overflow");
        }
        radius *= 2;
    }
}

pub fn enumerate_classes<S: Scalar>(norm: &super::NormSpec<S>, count: usize) -> Result<ClassEnumeration<S>> {
    norm.validate()?;
    enumerate_classes_with(norm, norm.euclidean_lower_bound(), count)
}

fn detect_flat_ties<S: Scalar, N: PlanarNorm<S> + ?Sized>(norm: &N, entries: &[ClassLength<S>]) -> bool {
    let tol = S::TIE_REL_TOL;
    let mut start = 0;
    while start < entries.len() {
        let mut end = start + 1;
        while end < entries.len() && approx_eq(entries[end].length, entries[start].length, tol) {
            end += 1;
        }
        let group = &entries[start..end];
        for (i, x) in group.iter().enumerate() {
            if x.class.is_trivial() {
                continue;
            }
            for y in &group[i + 1..] {
                if x.class.det(&y.class) == 0 {
                    continue;
                }
                let two = x.length + x.length;
                for s in [x.class + y.class, x.class - y.class] {
                    if norm.norm(s.to_vector()) >= two * (S::one() - S::lit(tol)) {
                        return true;
                    }
                }
            }
        }
        start = end;
    }
    false
}

/// The classes `h_1, …, h_k` that a construction prescribes: the trivial
/// class followed by primitive classes in enumeration order. Non-primitive
/// classes are skipped since their value follows from homogeneity.
pub fn pinned_classes<S: Scalar>(norm: &super::NormSpec<S>, k: usize) -> Result<Vec<ClassLength<S>>> {
    if k == 0 {
        return invalid("k must be at least 1");
    }
    let mut count = 2 * k + 4;
    loop {
        let en = enumerate_classes(norm, count)?;
        let picked: Vec<_> = en
            .entries
            .iter()
            .filter(|e| e.class.is_trivial() || e.class.is_primitive())
            .take(k)
            .cloned()
            .collect();
        if picked.len() == k {
            return Ok(picked);
        }
        count *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::NormSpec;

    fn classes(en: &ClassEnumeration<f64>) -> Vec<[i64; 2]> {
        en.entries.iter().map(|e| e.class.into()).collect()
    }

    #[test]
    fn euclidean_first_four() {
        let en = enumerate_classes(&NormSpec::<f64>::euclidean(), 4).unwrap();
        assert_eq!(classes(&en), vec![[0, 0], [0, 1], [1, 0], [1, 1]]);
        assert_eq!(en.entries[3].length, 2f64.sqrt());
        assert!(!en.flat_tie_warning);
        let one = enumerate_classes(&NormSpec::<f64>::euclidean(), 1).unwrap();
        assert_eq!(classes(&one), vec![[0, 0]]);
    }

    #[test]
    fn pnorm_diagonal_before_double() {
        let en = enumerate_classes(&NormSpec::<f64>::pnorm(4.0).unwrap(), 5).unwrap();
        let cl = classes(&en);
        let diag = cl.iter().position(|c| *c == [1, 1]).unwrap();
        assert!(diag < 5);
        assert!(!cl.contains(&[0, 2]) || cl.iter().position(|c| *c == [0, 2]).unwrap() > diag);
    }

    #[test]
    fn straight_polygon_warns() {
        let sq = NormSpec::<f64>::arc_polygon(vec![[1, 1], [-1, 1], [-1, -1], [1, -1]], None, 1.0).unwrap();
        let en = enumerate_classes(&sq, 9).unwrap();
        assert!(en.flat_tie_warning);
    }

    #[test]
    fn pinned_skip_non_primitive() {
        let p = pinned_classes(&NormSpec::<f64>::euclidean(), 7).unwrap();
        let cl: Vec<[i64; 2]> = p.iter().map(|e| e.class.into()).collect();
        assert_eq!(cl, vec![[0, 0], [0, 1], [1, 0], [1, 1], [1, -1], [1, 2], [1, -2]]);
    }
}

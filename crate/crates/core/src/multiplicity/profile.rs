use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::lattice_polygons::{f_of_m, DEFAULT_BUDGET};
use crate::norms::{enumerate_classes, IntegralClass, NormSpec};
use crate::scalar::Scalar;

/// Largest multiplicity for which `f(m)` is computed when checking profiles.
pub const MAX_CHECKED_M: usize = 6;

/// Fraction of numerically distinct gaps that may be merged before the
/// tolerance is flagged as too coarse.
const COARSE_FRACTION: f64 = 0.2;

#[derive(Clone, Debug, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct MultiplicityGroup<S> {
    pub length: S,
    pub classes: Vec<IntegralClass>,
    pub m: usize,
    /// Number of classes strictly shorter, the trivial class included.
    pub n: usize,
    /// `f(m)`, when `m ≤ MAX_CHECKED_M` and the group is nontrivial and complete.
    pub f_of_m: Option<i64>,
    /// `n ≥ f(m)`, when checked.
    pub bound_holds: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct MultiplicityProfile<S> {
    pub tie_tolerance: S,
    pub groups: Vec<MultiplicityGroup<S>>,
    /// The last group may continue past the enumerated classes.
    pub last_group_truncated: bool,
    pub coarse_tolerance_warning: bool,
}

impl<S: Scalar> MultiplicityProfile<S> {
    /// Groups for which `n ≥ f(m)` fails.
    pub fn violations(&self) -> Vec<&MultiplicityGroup<S>> {
        self.groups.iter().filter(|g| g.bound_holds == Some(false)).collect()
    }

    pub fn class_count(&self) -> usize {
        self.groups.iter().map(|g| g.m).sum()
    }

    /// First group of positive length.
    pub fn first_nontrivial(&self) -> Option<&MultiplicityGroup<S>> {
        self.groups.iter().find(|g| g.length > S::zero())
    }
}

/// `f(m)`, memoized across calls.
pub fn cached_f_of_m(m: usize) -> Result<i64> {
    static TABLE: OnceLock<Mutex<HashMap<usize, i64>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = table.lock().unwrap().get(&m) {
        return Ok(*v);
    }
    let v = f_of_m(m, DEFAULT_BUDGET)?;
    table.lock().unwrap().insert(m, v);
    Ok(v)
}

/// Groups a list of classes sorted by length into runs of equal length:
/// a run continues while lengths stay within `tie_tolerance` (relative) of
/// its first length. Each complete nontrivial group is checked against
/// `n ≥ f(m)`.
pub fn profile_from_lengths<S: Scalar>(
    entries: &[(IntegralClass, S)],
    tie_tolerance: S,
    last_group_truncated: bool,
) -> Result<MultiplicityProfile<S>> {
    if !(tie_tolerance >= S::zero() && tie_tolerance.is_finite()) {
        return invalid(format!("tie tolerance must be nonnegative, got {tie_tolerance}"));
    }
    if entries.windows(2).any(|w| w[1].1 < w[0].1 - tie_tolerance * w[0].1) {
        return invalid("entries must be sorted by length");
    }
    let mut groups: Vec<MultiplicityGroup<S>> = Vec::new();
    let noise = S::lit(1e-12);
    let (mut distinct_gaps, mut merged_gaps) = (0usize, 0usize);
    for (i, (class, length)) in entries.iter().enumerate() {
        if i > 0 {
            let prev = entries[i - 1].1;
            if *length - prev > noise * length.max(S::one()) {
                distinct_gaps += 1;
            }
        }
        match groups.last_mut() {
            Some(g) if *length - g.length <= tie_tolerance * g.length => {
                if *length - entries[i - 1].1 > noise * length.max(S::one()) {
                    merged_gaps += 1;
                }
                g.classes.push(*class);
                g.m += 1;
            }
            _ => {
                let n = groups.iter().map(|g| g.m).sum();
                groups.push(MultiplicityGroup {
                    length: *length,
                    classes: vec![*class],
                    m: 1,
                    n,
                    f_of_m: None,
                    bound_holds: None,
                });
            }
        }
    }
    let count = groups.len();
    for (i, g) in groups.iter_mut().enumerate() {
        let complete = !(last_group_truncated && i + 1 == count);
        if g.length > S::zero() && complete && g.m <= MAX_CHECKED_M {
            let f = cached_f_of_m(g.m)?;
            g.f_of_m = Some(f);
            g.bound_holds = Some(g.n as i64 >= f);
        }
    }
    let coarse = distinct_gaps > 0 && merged_gaps as f64 > COARSE_FRACTION * distinct_gaps as f64;
    Ok(MultiplicityProfile {
        tie_tolerance,
        groups,
        last_group_truncated,
        coarse_tolerance_warning: coarse,
    })
}

/// Profile of the first `class_budget` classes of a norm (the trivial class
/// included). The last group is flagged truncated when the next class ties
/// with it.
pub fn multiplicity_profile<S: Scalar>(
    norm: &NormSpec<S>,
    class_budget: usize,
    tie_tolerance: S,
) -> Result<MultiplicityProfile<S>> {
    if class_budget == 0 {
        return invalid("class budget must be at least 1");
    }
    let en = enumerate_classes(norm, class_budget + 1)?;
    let (kept, next) = en.entries.split_at(class_budget);
    let lengths: Vec<(IntegralClass, S)> = kept.iter().map(|e| (e.class, e.length)).collect();
    let last = lengths.last().unwrap().1;
    let truncated = next
        .first()
        .map(|e| e.length - last <= tie_tolerance * last)
        .unwrap_or(false);
    profile_from_lengths(&lengths, tie_tolerance, truncated)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclidean_square_systole() {
        let p = multiplicity_profile(&NormSpec::<f64>::euclidean(), 5, 1e-9).unwrap();
        let g = p.first_nontrivial().unwrap();
        assert_eq!(g.length, 1.0);
        assert_eq!(g.classes, vec![IntegralClass::new(0, 1), IntegralClass::new(1, 0)]);
        assert_eq!((g.m, g.n), (2, 1));
        assert_eq!(g.bound_holds, Some(true));
        assert_eq!(p.class_count(), 5);
        assert!(!p.last_group_truncated);
        let p = multiplicity_profile(&NormSpec::<f64>::euclidean(), 4, 1e-9).unwrap();
        assert!(p.last_group_truncated);
        assert_eq!(p.groups.last().unwrap().bound_holds, None);
    }

    #[test]
    fn hexagonal_triple() {
        let p = multiplicity_profile(&NormSpec::<f64>::hexagonal(), 10, 1e-9).unwrap();
        let g = p.first_nontrivial().unwrap();
        assert_eq!((g.m, g.n), (3, 1));
        assert!(p.violations().is_empty());
    }

    #[test]
    fn trivial_only() {
        let p = multiplicity_profile(&NormSpec::<f64>::euclidean(), 1, 1e-9).unwrap();
        assert_eq!(p.groups.len(), 1);
        assert_eq!((p.groups[0].m, p.groups[0].n), (1, 0));
        assert_eq!(p.groups[0].length, 0.0);
    }

    #[test]
    fn coarse_tolerance_is_flagged() {
        let e: Vec<(IntegralClass, f64)> = (0..10).map(|i| (IntegralClass::new(1, i), 1.0 + 0.01 * i as f64)).collect();
        let p = profile_from_lengths(&e, 0.5, false).unwrap();
        assert!(p.coarse_tolerance_warning);
        let p = profile_from_lengths(&e, 1e-9, false).unwrap();
        assert!(!p.coarse_tolerance_warning);
        assert_eq!(p.groups.len(), 10);
    }

    #[test]
    fn scaling_preserves_groups() {
        let base = multiplicity_profile(&NormSpec::<f64>::hexagonal(), 30, 1e-9).unwrap();
        let scaled = multiplicity_profile(&NormSpec::<f64>::hexagonal().with_scale(3.7).unwrap(), 30, 1e-9).unwrap();
        let mn = |p: &MultiplicityProfile<f64>| p.groups.iter().map(|g| (g.m, g.n)).collect::<Vec<_>>();
        assert_eq!(mn(&base), mn(&scaled));
    }
}

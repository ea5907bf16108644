use serde::Serialize;

use super::spec::{NormSpec, PlanarNorm};
use crate::error::{invalid, Error, Result};
use crate::scalar::{norm2, Scalar};

#[derive(Clone, Debug, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct ConvexityReport<S> {
    pub passed: bool,
    pub pairs_checked: usize,
    /// Unit-norm pair `(u, v)` with `‖u+v‖ ≥ 2 − margin`, if any.
    pub witness: Option<([S; 2], [S; 2])>,
}

/// Samples `sample_count` directions, rescales them to the unit sphere and
/// requires `‖u+v‖ < 2 − tolerance·θ²` for every pair whose angular
/// separation `θ` exceeds `tolerance`.
pub fn strict_convexity_check<S: Scalar>(
    norm: &NormSpec<S>,
    sample_count: usize,
    tolerance: S,
) -> Result<ConvexityReport<S>> {
    norm.validate()?;
    if sample_count < 8 {
        return invalid("strict convexity check needs at least 8 samples");
    }
    let two_pi = S::PI() + S::PI();
    let pts: Vec<([S; 2], S)> = (0..sample_count)
        .map(|j| {
            let th = two_pi * S::from_usize(j).unwrap() / S::from_usize(sample_count).unwrap();
            let d = [th.cos(), th.sin()];
            let n = norm.eval(d);
            ([d[0] / n, d[1] / n], th)
        })
        .collect();
    let mut checked = 0;
    for (i, (u, tu)) in pts.iter().enumerate() {
        for (v, tv) in &pts[i + 1..] {
            let mut sep = (*tv - *tu).abs();
            if sep > S::PI() {
                sep = two_pi - sep;
            }
            if sep <= tolerance || S::PI() - sep <= tolerance {
                continue;
            }
            checked += 1;
            let s = norm.eval([u[0] + v[0], u[1] + v[1]]);
            if s >= S::lit(2.0) - tolerance * sep * sep {
                return Ok(ConvexityReport {
                    passed: false,
                    pairs_checked: checked,
                    witness: Some((*u, *v)),
                });
            }
        }
    }
    Ok(ConvexityReport {
        passed: true,
        pairs_checked: checked,
        witness: None,
    })
}

/// `B = sqrt(v1² + v2²)` where `v1 = ‖(1,0)‖`, `v2 = ‖(0,1)‖`; every norm with
/// these values is `B`-Lipschitz with respect to the Euclidean distance.
pub fn lipschitz_bound<S: Scalar>(v1: S, v2: S) -> Result<S> {
    if !(v1 > S::zero() && v2 > S::zero()) || !v1.is_finite() || !v2.is_finite() {
        return invalid(format!("norm values at e1, e2 must be positive, got {v1}, {v2}"));
    }
    Ok(v1.hypot(v2))
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct ConvergenceReport<S> {
    /// `sup_x |‖x‖_j − ‖x‖|` over the grid, one entry per norm.
    pub deviations: Vec<S>,
    /// First index from which every norm agrees with the limit at `e1` and `e2`.
    pub pinned_from: Option<usize>,
    pub lipschitz_constant: S,
    pub pairs_checked: usize,
}

/// Points on `rings` concentric circles of radius `r/rings` (`r = 1..=rings`)
/// with `directions` points each, plus the origin.
pub fn disk_grid<S: Scalar>(rings: usize, directions: usize) -> Vec<[S; 2]> {
    let mut out = vec![[S::zero(), S::zero()]];
    for r in 1..=rings {
        let rad = S::from_usize(r).unwrap() / S::from_usize(rings).unwrap();
        out.extend(circle_directions::<S>(directions).into_iter().map(|d| [rad * d[0], rad * d[1]]));
    }
    out
}

/// `n` equally spaced unit vectors starting at `(1,0)`.
pub fn circle_directions<S: Scalar>(n: usize) -> Vec<[S; 2]> {
    let two_pi = S::PI() + S::PI();
    (0..n)
        .map(|j| {
            let th = two_pi * S::from_usize(j).unwrap() / S::from_usize(n).unwrap();
            [th.cos(), th.sin()]
        })
        .collect()
}

fn grid_pairs(n: usize) -> Vec<(usize, usize)> {
    if n <= 300 {
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
    } else {
        // a deterministic spread of offsets keeps the count linear in n
        let offsets = [1usize, 2, 3, 5, 8, 13, 21, 34, 55, 89];
        (0..n)
            .flat_map(|i| offsets.iter().map(move |o| (i, (i + o) % n)))
            .filter(|(i, j)| i != j)
            .collect()
    }
}

/// Sup deviations of a sequence of norms from `limit` on a compact sample
/// set, plus the shared Lipschitz check for every norm from the pinned index
/// on. A Lipschitz violation is an error naming `(j, x, y)`.
pub fn compact_convergence_check<S: Scalar>(
    norms: &[&dyn PlanarNorm<S>],
    limit: &dyn PlanarNorm<S>,
    grid: &[[S; 2]],
    tolerance: S,
) -> Result<ConvergenceReport<S>> {
    if grid.is_empty() {
        return invalid("convergence grid is empty");
    }
    let e1 = [S::one(), S::zero()];
    let e2 = [S::zero(), S::one()];
    let (l1, l2) = (limit.norm(e1), limit.norm(e2));
    let b = lipschitz_bound(l1, l2)?;
    let limit_vals: Vec<S> = grid.iter().map(|x| limit.norm(*x)).collect();
    let deviations = norms
        .iter()
        .map(|n| {
            grid.iter()
                .zip(&limit_vals)
                .map(|(x, l)| (n.norm(*x) - *l).abs())
                .fold(S::zero(), S::max)
        })
        .collect();
    let pins = |n: &&dyn PlanarNorm<S>| (n.norm(e1) - l1).abs() <= tolerance && (n.norm(e2) - l2).abs() <= tolerance;
    let mut pinned_from = None;
    for j in (0..norms.len()).rev() {
        if pins(&norms[j]) {
            pinned_from = Some(j);
        } else {
            break;
        }
    }
    let mut pairs_checked = 0;
    if let Some(start) = pinned_from {
        let pairs = grid_pairs(grid.len());
        for (j, n) in norms.iter().enumerate().skip(start) {
            let vals: Vec<S> = grid.iter().map(|x| n.norm(*x)).collect();
            for &(a, c) in &pairs {
                let (x, y) = (grid[a], grid[c]);
                let dist = norm2([x[0] - y[0], x[1] - y[1]]);
                pairs_checked += 1;
                if (vals[a] - vals[c]).abs() > b * dist + tolerance {
                    return Err(Error::CheckFailed(format!(
                        "Lipschitz bound {b} violated by norm {j} at x = ({}, {}), y = ({}, {})",
                        x[0], x[1], y[0], y[1]
                    )));
                }
            }
        }
    }
    Ok(ConvergenceReport {
        deviations,
        pinned_from,
        lipschitz_constant: b,
        pairs_checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::FnNorm;

    #[test]
    fn convexity_examples() {
        let tol = 1e-9;
        assert!(strict_convexity_check(&NormSpec::<f64>::euclidean(), 64, tol).unwrap().passed);
        assert!(strict_convexity_check(&NormSpec::<f64>::pnorm(4.0).unwrap(), 64, tol).unwrap().passed);
        let flat = NormSpec::<f64>::arc_polygon(vec![[1, 0], [0, 1], [-1, 0], [0, -1]], None, 1.0).unwrap();
        let rep = strict_convexity_check(&flat, 64, tol).unwrap();
        assert!(!rep.passed);
        let (u, v) = rep.witness.unwrap();
        // both witnesses lie on the same edge of the diamond
        assert!((u[0].abs() + u[1].abs() - 1.0).abs() < 1e-12);
        assert!((v[0].abs() + v[1].abs() - 1.0).abs() < 1e-12);
        assert!(u[0].signum() == v[0].signum() || u[1].signum() == v[1].signum());
        let bulged = NormSpec::<f64>::arc_polygon(vec![[1, 0], [0, 1], [-1, 0], [0, -1]], Some(3.0), 1.0).unwrap();
        assert!(strict_convexity_check(&bulged, 64, tol).unwrap().passed);
        assert!(strict_convexity_check(&bulged, 4, tol).is_err());
    }

    #[test]
    fn lipschitz_examples() {
        assert!((lipschitz_bound(1.0, 1.0).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(lipschitz_bound(3.0, 4.0).unwrap(), 5.0);
        assert!((lipschitz_bound(2.0, 2.0).unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-15);
        assert!(lipschitz_bound(0.0, 1.0).is_err());
        assert!(lipschitz_bound(1.0, -2.0).is_err());
    }

    #[test]
    fn constant_sequence_has_zero_deviation() {
        let e = NormSpec::<f64>::euclidean();
        let seq: Vec<&dyn PlanarNorm<f64>> = vec![&e, &e, &e];
        let rep = compact_convergence_check(&seq, &e, &disk_grid(4, 16), 1e-9).unwrap();
        assert!(rep.deviations.iter().all(|d| *d == 0.0));
        assert_eq!(rep.pinned_from, Some(0));
        assert!(rep.pairs_checked > 0);
    }

    #[test]
    fn scaled_sequence_deviation_is_one_over_j() {
        let e = NormSpec::<f64>::euclidean();
        let scaled: Vec<NormSpec<f64>> = (1..=5).map(|j| e.clone().with_scale(1.0 + 1.0 / j as f64).unwrap()).collect();
        let seq: Vec<&dyn PlanarNorm<f64>> = scaled.iter().map(|n| n as &dyn PlanarNorm<f64>).collect();
        let rep = compact_convergence_check(&seq, &e, &disk_grid(5, 32), 1e-9).unwrap();
        for (j, d) in rep.deviations.iter().enumerate() {
            assert!((d - 1.0 / (j + 1) as f64).abs() < 1e-12);
        }
        assert_eq!(rep.pinned_from, None);
    }

    #[test]
    fn lipschitz_violation_names_witness() {
        let e = NormSpec::<f64>::euclidean();
        // agrees with the limit on e1, e2 but is far too steep elsewhere
        let bad = FnNorm(|v: [f64; 2]| {
            let r = v[0].hypot(v[1]);
            let th = v[1].atan2(v[0]);
            r * (1.0 + 5.0 * (2.0 * th).sin().powi(2))
        });
        let seq: Vec<&dyn PlanarNorm<f64>> = vec![&bad];
        let err = compact_convergence_check(&seq, &e, &disk_grid(3, 32), 1e-9).unwrap_err();
        assert!(matches!(err, Error::CheckFailed(ref m) if m.contains("norm 0")));
    }
}

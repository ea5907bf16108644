use serde::Serialize;

use super::profile::{cached_f_of_m, multiplicity_profile, MultiplicityGroup};
use crate::error::{invalid, Error, Result};
use crate::lattice_polygons::{min_interior_symmetric, SymmetricWitness, DEFAULT_BUDGET};
use crate::norms::{arc_polygon_max_radius, strict_convexity_check, IntegralClass, NormSpec};
use crate::scalar::Scalar;

pub const MAX_SHARP_M: usize = 6;
const MAX_DOUBLINGS: usize = 32;
const SCAN_TOL: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct SharpNorm<S> {
    pub m: usize,
    pub level: S,
    pub norm: NormSpec<S>,
    /// Lattice points at norm value `level` found by the scan.
    pub level_points: Vec<[i64; 2]>,
    /// Lattice points of norm below `level`.
    pub inner_points: Vec<[i64; 2]>,
}

/// Lattice points `p` with `‖p‖ ≤ level·(1 + tol)`, split into those at the
/// level and those strictly below it.
fn scan<S: Scalar>(norm: &NormSpec<S>, level: S, radius: i64) -> (Vec<[i64; 2]>, Vec<[i64; 2]>) {
    let tol = S::lit(SCAN_TOL) * level;
    let (mut at, mut below) = (Vec::new(), Vec::new());
    for x in -radius..=radius {
        for y in -radius..=radius {
            let v = norm.eval([S::from_i64_lossy(x), S::from_i64_lossy(y)]);
            if (v - level).abs() <= tol {
                at.push([x, y]);
            } else if v < level {
                below.push([x, y]);
            }
        }
    }
    (at, below)
}

/// A strictly convex norm whose shortest nontrivial length has multiplicity
/// `m` with exactly `f(m)` classes below it.
///
/// For `m = 1` this is the ellipse `diag(1, 1.3)` scaled to `‖(1,0)‖ = level`.
/// For `m ≥ 2` the edges of a centrally symmetric `2m`-gon with the least
/// number of interior lattice points are replaced by circular arcs; the
/// radius starts at the longest edge and doubles until the bulged region
/// is convex and picks up no lattice point outside the polygon.
pub fn construct_sharp_norm<S: Scalar>(m: usize, level: S) -> Result<SharpNorm<S>> {
    if !(level > S::zero() && level.is_finite()) {
        return invalid(format!("level must be positive, got {level}"));
    }
    if m == 0 || m > MAX_SHARP_M {
        return invalid(format!("sharp norms are built for 1 ≤ m ≤ {MAX_SHARP_M}, got {m}"));
    }
    if m == 1 {
        let norm = NormSpec::ellipse([[S::one(), S::zero()], [S::zero(), S::lit(1.3)]])?.with_scale(level)?;
        let (at, below) = scan(&norm, level, 2);
        return Ok(SharpNorm {
            m,
            level,
            norm,
            level_points: at,
            inner_points: below,
        });
    }
    let sym = min_interior_symmetric(2 * m, DEFAULT_BUDGET)?;
    let polygon = match &sym.witness {
        SymmetricWitness::Polygon(p) => p.clone(),
        SymmetricWitness::Segment(_) => return Err(Error::Construction("expected a polygon witness".into())),
    };
    let vertices = polygon.vertices().to_vec();
    let longest = polygon
        .edges()
        .iter()
        .map(|e| S::from_i64_lossy(e[0] * e[0] + e[1] * e[1]).sqrt())
        .fold(S::zero(), S::max);
    let mut radius = longest;
    let mut last_problem = String::new();
    for _ in 0..=MAX_DOUBLINGS {
        match NormSpec::arc_polygon(vertices.clone(), Some(radius), level) {
            Err(e) => last_problem = e.to_string(),
            Ok(norm) => {
                let reach = arc_polygon_max_radius(&vertices, Some(radius)).ceil().to_i64().unwrap() + 1;
                let (at, below) = scan(&norm, level, reach);
                let outside = below.iter().chain(&at).find(|p| polygon.locate(**p) < 0);
                let extra_level = at.iter().find(|p| !vertices.contains(p));
                match (outside, extra_level) {
                    (None, None) if at.len() == vertices.len() => {
                        return Ok(SharpNorm {
                            m,
                            level,
                            norm,
                            level_points: at,
                            inner_points: below,
                        })
                    }
                    (Some(p), _) => last_problem = format!("lattice point {p:?} outside the polygon has norm ≤ level"),
                    (_, Some(p)) => last_problem = format!("non-vertex lattice point {p:?} sits at the level"),
                    _ => last_problem = "a vertex is missing from the level set".into(),
                }
            }
        }
        radius = radius + radius;
    }
    Err(Error::Construction(format!(
        "no admissible arc radius for m = {m} after {MAX_DOUBLINGS} doublings: {last_problem}"
    )))
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct SharpnessReport<S> {
    pub m: usize,
    pub f_of_m: i64,
    pub norm: NormSpec<S>,
    pub group: MultiplicityGroup<S>,
    /// Classes strictly shorter than the level, canonical.
    pub classes_below: Vec<IntegralClass>,
    pub strictly_convex: bool,
    pub level_points: usize,
    pub passed: bool,
}

/// Builds the sharp norm for `m` and checks that its length at the level has
/// multiplicity `m` with exactly `f(m)` classes below.
pub fn verify_sharpness<S: Scalar>(m: usize) -> Result<SharpnessReport<S>> {
    let level = S::one();
    let sharp = construct_sharp_norm::<S>(m, level)?;
    let f = cached_f_of_m(m)?;
    let below: Vec<IntegralClass> = {
        let mut v: Vec<IntegralClass> = sharp
            .inner_points
            .iter()
            .map(|p| IntegralClass::from(*p))
            .filter(|c| c.is_canonical())
            .collect();
        v.sort_by(|a, b| a.lex_cmp(b));
        v
    };
    let budget = below.len() + m;
    let tie = S::lit(S::TIE_REL_TOL);
    let profile = multiplicity_profile(&sharp.norm, budget, tie)?;
    let group = profile
        .groups
        .iter()
        .find(|g| (g.length - level).abs() <= tie * level)
        .cloned()
        .ok_or_else(|| Error::CheckFailed(format!("no group at level {level} for m = {m}")))?;
    let convex = strict_convexity_check(&sharp.norm, 720, S::lit(1e-7))?.passed;
    let passed = group.m == m
        && group.n as i64 == f
        && below.len() as i64 == f
        && convex
        && sharp.level_points.len() == 2 * m
        && !profile.last_group_truncated;
    Ok(SharpnessReport {
        m,
        f_of_m: f,
        norm: sharp.norm,
        group,
        classes_below: below,
        strictly_convex: convex,
        level_points: sharp.level_points.len(),
        passed,
    })
}

//! Oriented distance to the negative ordering cone.
//!
//! `D(y) = d(y, -C) - d(y, R^m \ -C)`. Outside `-C` the first term is evaluated
//! exactly by projecting onto `-C = { z : <g, z> <= 0 for every dual generator g }`
//! with a primal active-set method. Inside, the distance to the complement is
//! the distance to the nearest bounding hyperplane, since the complement is the
//! union of the open half-spaces `<g, z> > 0`.
//!
//! The dual formula `D(y) = max { <xi, y> : xi in C*, |xi| = 1 }` is only used as
//! a sampled lower bound; see [`oriented_distance_sampled`].

use crate::cone::OrderingCone;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{axpy, dist, dot, least_squares_rows, norm};

const MAX_ACTIVE_SET_ITERATIONS: usize = 500;

#[derive(Debug, Clone, PartialEq)]
pub struct OrientedDistanceResult {
    pub value: f64,
    /// Projection of `y` onto `-C`, or `y` itself when `y ∈ -C`.
    pub nearest_point: Vec<f64>,
    /// Facet of `-C` closest to `y` when `y ∈ -C` (lowest index on ties).
    pub active_facet: Option<usize>,
}

/// Euclidean projection of `y` onto `-C`.
pub fn project_neg_cone(cone: &OrderingCone, y: &[f64]) -> Result<Vec<f64>> {
    check_dim(cone.ambient_dim(), y.len())?;
    project_unchecked(cone, y)
}

fn project_unchecked(cone: &OrderingCone, y: &[f64]) -> Result<Vec<f64>> {
    let normals = cone.dual_generators();
    let m = y.len();
    let scale = 1.0 + norm(y);
    let step_eps = 1e-14 * scale;

    let mut z = vec![0.0; m];
    let mut working: Vec<usize> = Vec::new();

    for _ in 0..MAX_ACTIVE_SET_ITERATIONS {
        // Minimizer of |z - y| on the subspace where the working constraints
        // hold with equality; `mu` are the associated multipliers.
        let (target, mu) = if working.is_empty() {
            (y.to_vec(), Vec::new())
        } else {
            let rows: Vec<Vec<f64>> = working.iter().map(|&i| normals[i].clone()).collect();
            let mu = least_squares_rows(&rows, y).ok_or_else(|| {
                Error::NumericalFailure("singular working set in cone projection".into())
            })?;
            let mut t = y.to_vec();
            for (row, coef) in rows.iter().zip(&mu) {
                axpy(&mut t, -coef, row);
            }
            (t, mu)
        };
        let p: Vec<f64> = target.iter().zip(&z).map(|(t, zi)| t - zi).collect();

        if norm(&p) <= step_eps {
            let most_negative = mu
                .iter()
                .enumerate()
                .filter(|(_, &l)| l < -1e-13 * scale)
                .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(&b.0)));
            match most_negative {
                None => return Ok(target),
                Some((pos, _)) => {
                    working.remove(pos);
                }
            }
        } else {
            let mut alpha = 1.0;
            let mut blocking = None;
            for (i, g) in normals.iter().enumerate() {
                if working.contains(&i) {
                    continue;
                }
                let gp = dot(g, &p);
                if gp > 1e-15 * norm(&p) {
                    let step = (-dot(g, &z)).max(0.0) / gp;
                    if step < alpha {
                        alpha = step;
                        blocking = Some(i);
                    }
                }
            }
            axpy(&mut z, alpha, &p);
            if let Some(i) = blocking {
                working.push(i);
            }
        }
    }
    Err(Error::NumericalFailure(
        "active-set projection did not converge".into(),
    ))
}

/// Exact oriented distance `D_{-C}(y)`.
pub fn oriented_distance(cone: &OrderingCone, y: &[f64]) -> Result<OrientedDistanceResult> {
    check_dim(cone.ambient_dim(), y.len())?;
    oriented_distance_unchecked(cone, y)
}

pub(crate) fn oriented_distance_unchecked(
    cone: &OrderingCone,
    y: &[f64],
) -> Result<OrientedDistanceResult> {
    let mut best = f64::NEG_INFINITY;
    let mut facet = 0;
    for (i, g) in cone.dual_generators().iter().enumerate() {
        let v = dot(g, y);
        if v > best {
            best = v;
            facet = i;
        }
    }
    if best <= cone.tol() {
        return Ok(OrientedDistanceResult {
            value: best,
            nearest_point: y.to_vec(),
            active_facet: Some(facet),
        });
    }
    let p = project_unchecked(cone, y)?;
    Ok(OrientedDistanceResult {
        value: dist(y, &p),
        nearest_point: p,
        active_facet: None,
    })
}

/// Value-only shorthand used by the lattice scans.
pub(crate) fn oriented_value(cone: &OrderingCone, y: &[f64]) -> Result<f64> {
    oriented_distance_unchecked(cone, y).map(|r| r.value)
}

/// `max <xi, y>` over the given unit vectors of `C*`: a lower bound on the
/// exact oriented distance that tightens as the samples densify.
pub fn oriented_distance_sampled(
    cone: &OrderingCone,
    y: &[f64],
    samples: &[Vec<f64>],
) -> Result<f64> {
    check_dim(cone.ambient_dim(), y.len())?;
    if samples.is_empty() {
        return Err(Error::InvalidInput("empty dual sample list".into()));
    }
    samples
        .iter()
        .map(|xi| {
            check_dim(cone.ambient_dim(), xi.len())?;
            Ok(dot(xi, y))
        })
        .try_fold(f64::NEG_INFINITY, |acc, v: Result<f64>| Ok(acc.max(v?)))
}

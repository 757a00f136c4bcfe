//! Independent oracles. Nothing here calls the library routines it is used to
//! check; cones are described only by their generators.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Projection of `y` onto `-cone(gens)` by trying every generator subset: the
/// projection is the least-squares fit on the subset spanning its face, with
/// nonnegative weights; the closest feasible fit wins.
pub fn project_neg_cone(gens: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let m = y.len();
    let mut best = vec![0.0; m];
    let mut best_d = norm(y);
    for k in 1..=gens.len().min(m) {
        for s in subsets(gens.len(), k) {
            let a = DMatrix::from_fn(m, k, |r, c| -gens[s[c]][r]);
            let b = DVector::from_column_slice(y);
            let svd = a.clone().svd(true, true);
            if svd.singular_values.iter().any(|v| *v < 1e-12) {
                continue;
            }
            let Ok(lambda) = svd.solve(&b, 1e-14) else { continue };
            if lambda.iter().any(|l| *l < -1e-14) {
                continue;
            }
            let p = a * lambda;
            let d = (b - &p).norm();
            if d < best_d {
                best_d = d;
                best = p.iter().copied().collect();
            }
        }
    }
    best
}

/// Unit outward normals `n` of the facets of `cone(gens)`, with `<n, c> >= 0`
/// for every generator, found from the (m-1)-subsets of generators.
pub fn facet_normals(gens: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let m = gens[0].len();
    let mut out: Vec<Vec<f64>> = Vec::new();
    for s in subsets(gens.len(), m - 1) {
        // generalized cross product: cofactors of the (m-1) x m generator block
        let mut n: Vec<f64> = (0..m)
            .map(|k| {
                let minor = DMatrix::from_fn(m - 1, m - 1, |r, c| gens[s[r]][if c < k { c } else { c + 1 }]);
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign * minor.determinant()
            })
            .collect();
        let scale = norm(&n);
        if scale < 1e-10 {
            continue;
        }
        n.iter_mut().for_each(|v| *v /= scale);
        let signs: Vec<f64> = gens.iter().map(|g| dot(&n, g)).collect();
        let pos = signs.iter().all(|v| *v >= -1e-12);
        let neg = signs.iter().all(|v| *v <= 1e-12);
        if !pos && !neg {
            continue;
        }
        if !pos {
            n.iter_mut().for_each(|v| *v = -*v);
        }
        if !out.iter().any(|o| norm(&sub(o, &n)) < 1e-9) {
            out.push(n);
        }
    }
    out
}

/// `d(y, -C) - d(y, R^m \ -C)`: the projection distance outside, and minus the
/// distance to the nearest facet hyperplane inside.
pub fn oriented_distance(gens: &[Vec<f64>], y: &[f64]) -> f64 {
    let outside = norm(&sub(y, &project_neg_cone(gens, y)));
    if outside > 1e-12 {
        return outside;
    }
    facet_normals(gens)
        .iter()
        .map(|n| dot(n, y))
        .fold(f64::NEG_INFINITY, f64::max)
        .min(0.0)
}

/// `|y₊|` outside `-R^m_+`, `max_i y_i` inside.
pub fn orthant_closed_form(y: &[f64]) -> f64 {
    if y.iter().any(|v| *v > 0.0) {
        y.iter().map(|v| v.max(0.0).powi(2)).sum::<f64>().sqrt()
    } else {
        y.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Coefficients of `y` in a basis of generators (simplicial cones only).
pub fn simplicial_coefficients(gens: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let m = y.len();
    assert_eq!(gens.len(), m, "simplicial cone expected");
    let a = DMatrix::from_fn(m, m, |r, c| gens[c][r]);
    let lambda = a.lu().solve(&DVector::from_column_slice(y)).expect("independent generators");
    lambda.iter().copied().collect()
}

/// `y ∈ -int C` for a simplicial cone with unit generators, with margin `tol`.
pub fn in_neg_interior(gens: &[Vec<f64>], y: &[f64], tol: f64) -> bool {
    simplicial_coefficients(gens, y).iter().all(|l| *l < -tol)
}

/// Value of `min_{w in box} max_i (Aw)_i` as the LP `min t` subject to
/// `Aw <= t`, `l <= w <= u`, by enumerating vertices of the feasible region.
pub fn bilinear_box_value(a: &[Vec<f64>], lower: &[f64], upper: &[f64]) -> f64 {
    let q = lower.len();
    // rows over (w, t): coefficient vector and right-hand side of `row . v <= rhs`
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for ai in a {
        let mut r = ai.clone();
        r.push(-1.0);
        rows.push((r, 0.0));
    }
    for j in 0..q {
        let mut e = vec![0.0; q + 1];
        e[j] = 1.0;
        rows.push((e.clone(), upper[j]));
        e[j] = -1.0;
        rows.push((e, -lower[j]));
    }
    let mut best = f64::INFINITY;
    for s in subsets(rows.len(), q + 1) {
        let m = DMatrix::from_fn(q + 1, q + 1, |r, c| rows[s[r]].0[c]);
        let b = DVector::from_fn(q + 1, |r, _| rows[s[r]].1);
        let Some(v) = m.lu().solve(&b) else { continue };
        let v: Vec<f64> = v.iter().copied().collect();
        if !v.iter().all(|x| x.is_finite()) {
            continue;
        }
        let feasible = rows.iter().all(|(r, rhs)| dot(r, &v) <= rhs + 1e-9);
        if feasible {
            best = best.min(v[q]);
        }
    }
    best
}

/// `Σ_{i>=1} 2^-i t_i / (1 + t_i)` with `t_i = c · min(i, reach)`, the distance
/// between `f` and `f + c|x - x̄| k`, `|k| = 1`, when `reach` is the largest
/// distance from the anchor `x̄` to a point of the domain.
pub fn radial_metric(c: f64, reach: f64) -> f64 {
    (1..=80)
        .map(|i| {
            let t = c * (i as f64).min(reach);
            0.5f64.powi(i) * t / (1.0 + t)
        })
        .sum()
}

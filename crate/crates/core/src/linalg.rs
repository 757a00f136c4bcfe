//! Small dense vector helpers on `&[f64]`.
//!
//! Everything in the toolkit lives in low dimension (d, m rarely above 8), so
//! plain slices are used for points and values; nalgebra is only pulled in for
//! the few linear solves and rank computations.

use nalgebra::{DMatrix, DVector};

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[inline]
pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[inline]
pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

#[inline]
pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// `y += s * x`
#[inline]
pub fn axpy(y: &mut [f64], s: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += s * xi;
    }
}

pub fn normalized(a: &[f64]) -> Vec<f64> {
    let n = norm(a);
    scale(a, 1.0 / n)
}

/// Numerical rank of the matrix whose rows are `rows`.
pub fn rank(rows: &[Vec<f64>], tol: f64) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let m = rows[0].len();
    let mat = DMatrix::from_fn(rows.len(), m, |i, j| rows[i][j]);
    mat.svd(false, false).rank(tol)
}

/// Solve the square system `a x = b`. Returns `None` when `a` is singular.
pub fn solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mat = DMatrix::from_fn(n, n, |i, j| a[i][j]);
    let rhs = DVector::from_column_slice(b);
    let lu = mat.lu();
    lu.solve(&rhs).map(|x| x.iter().copied().collect())
}

/// Least-squares solution of `min ||A^T c - y||` where the rows of `A` are
/// `rows`. Returns the coefficient vector `c`.
pub fn least_squares_rows(rows: &[Vec<f64>], y: &[f64]) -> Option<Vec<f64>> {
    let k = rows.len();
    let gram: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..k).map(|j| dot(&rows[i], &rows[j])).collect())
        .collect();
    let rhs: Vec<f64> = rows.iter().map(|r| dot(r, y)).collect();
    solve(&gram, &rhs)
}

pub fn determinant(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    if n == 0 {
        return 1.0;
    }
    DMatrix::from_fn(n, n, |i, j| a[i][j]).determinant()
}

/// Generalized cross product: a vector orthogonal to the `m - 1` given rows in
/// R^m, with entries given by signed maximal minors. Zero when the rows are
/// linearly dependent.
pub fn orthogonal_complement(rows: &[Vec<f64>], m: usize) -> Vec<f64> {
    debug_assert_eq!(rows.len() + 1, m);
    (0..m)
        .map(|j| {
            let minor: Vec<Vec<f64>> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, v)| *v)
                        .collect()
                })
                .collect();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * determinant(&minor)
        })
        .collect()
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            if n - i < k - current.len() {
                break;
            }
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

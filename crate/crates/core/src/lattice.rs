//! Box domains and the uniform lattices that stand in for the decision space.
//!
//! Lattice points are indexed lexicographically with the first coordinate
//! most significant; every "lowest index" tie-break in the crate refers to
//! this order. Scans run in parallel but all reductions are order-insensitive
//! (min/max with index tie-breaks), so results do not depend on scheduling.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{check_dim, Error, Result};

/// Axis-aligned box `[lower, upper]` with `lower < upper` componentwise.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxDomain {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoxDomain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        check_dim(lower.len(), upper.len())?;
        if lower.is_empty() {
            return Err(Error::InvalidInput("box must have positive dimension".into()));
        }
        for (l, u) in lower.iter().zip(&upper) {
            if !(l.is_finite() && u.is_finite() && l < u) {
                return Err(Error::InvalidInput(format!(
                    "box bounds must be finite with lower < upper (got [{l}, {u}])"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// `[-r, r]^d`
    pub fn cube(d: usize, r: f64) -> Result<Self> {
        Self::new(vec![-r; d], vec![r; d])
    }

    pub fn interval(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![a], vec![b])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn center(&self) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| 0.5 * (l + u))
            .collect()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (l, u))| *v >= *l && *v <= *u)
    }

    /// Distance from `x` to the farthest corner of the box.
    pub fn farthest_corner_distance(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(v, (l, u))| {
                let d = (v - l).abs().max((u - v).abs());
                d * d
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn diameter(&self) -> f64 {
        crate::linalg::dist(&self.lower, &self.upper)
    }

    /// Uniform random point of the box.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| rng.random_range(*l..=*u))
            .collect()
    }

    /// The box scaled by `factor` about its center.
    pub fn expanded(&self, factor: f64) -> Self {
        let c = self.center();
        let lower = self
            .lower
            .iter()
            .zip(&c)
            .map(|(l, ci)| ci + factor * (l - ci))
            .collect();
        let upper = self
            .upper
            .iter()
            .zip(&c)
            .map(|(u, ci)| ci + factor * (u - ci))
            .collect();
        Self { lower, upper }
    }
}

/// Uniform lattice with `resolution` points per axis (endpoints included).
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    domain: BoxDomain,
    resolution: usize,
    steps: Vec<f64>,
    len: usize,
}

impl Lattice {
    pub fn new(domain: &BoxDomain, resolution: usize) -> Result<Self> {
        if resolution < 2 {
            return Err(Error::InvalidInput("grid resolution must be at least 2 per axis".into()));
        }
        let len = (0..domain.dim())
            .try_fold(1usize, |acc, _| acc.checked_mul(resolution))
            .ok_or_else(|| Error::InvalidInput("lattice too large".into()))?;
        let steps = domain
            .lower
            .iter()
            .zip(&domain.upper)
            .map(|(l, u)| (u - l) / (resolution - 1) as f64)
            .collect();
        Ok(Self {
            domain: domain.clone(),
            resolution,
            steps,
            len,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    /// Largest axis step.
    pub fn spacing(&self) -> f64 {
        self.steps.iter().copied().fold(0.0, f64::max)
    }

    /// Length of a cell diagonal.
    pub fn cell_diagonal(&self) -> f64 {
        crate::linalg::norm(&self.steps)
    }

    pub fn fill_point(&self, mut index: usize, out: &mut [f64]) {
        let d = self.dim();
        for axis in (0..d).rev() {
            let k = index % self.resolution;
            index /= self.resolution;
            out[axis] = if k == self.resolution - 1 {
                self.domain.upper[axis]
            } else {
                self.domain.lower[axis] + k as f64 * self.steps[axis]
            };
        }
    }

    pub fn point(&self, index: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.fill_point(index, &mut out);
        out
    }

    /// Index of the lattice point nearest to `x` (clamped into the box).
    pub fn nearest_index(&self, x: &[f64]) -> usize {
        let mut index = 0usize;
        for axis in 0..self.dim() {
            let t = ((x[axis] - self.domain.lower[axis]) / self.steps[axis]).round();
            let k = t.clamp(0.0, (self.resolution - 1) as f64) as usize;
            index = index * self.resolution + k;
        }
        index
    }

    /// Evaluate `f` at every lattice point, in index order.
    pub fn map<T, F>(&self, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(&[f64]) -> T + Sync,
    {
        let d = self.dim();
        (0..self.len)
            .into_par_iter()
            .map_init(
                || vec![0.0; d],
                |buf, i| {
                    self.fill_point(i, buf);
                    f(buf)
                },
            )
            .collect()
    }

    /// Lowest-index minimizer of `f` over the lattice. NaN counts as `+inf`.
    pub fn argmin<F>(&self, f: F) -> (usize, f64)
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        let d = self.dim();
        (0..self.len)
            .into_par_iter()
            .map_init(
                || vec![0.0; d],
                |buf, i| {
                    self.fill_point(i, buf);
                    let v = f(buf);
                    (i, if v.is_nan() { f64::INFINITY } else { v })
                },
            )
            .reduce(|| (usize::MAX, f64::INFINITY), better)
    }

    /// `(index, value)` for every lattice point with `f <= threshold`, in index order.
    pub fn collect_below<F>(&self, f: F, threshold: f64) -> Vec<(usize, f64)>
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        let d = self.dim();
        (0..self.len)
            .into_par_iter()
            .map_init(
                || vec![0.0; d],
                |buf, i| {
                    self.fill_point(i, buf);
                    (i, f(buf))
                },
            )
            .filter(|(_, v)| *v <= threshold)
            .collect()
    }
}

/// Reduction step for lowest-index argmin.
pub(crate) fn better(a: (usize, f64), b: (usize, f64)) -> (usize, f64) {
    if b.1 < a.1 || (b.1 == a.1 && b.0 < a.0) {
        b
    } else {
        a
    }
}

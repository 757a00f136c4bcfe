//! Polyhedral ordering cones.
//!
//! A cone `C ⊂ R^m` is stored twice: by its generators (conic hull) and by the
//! extreme rays of its dual `C*`, which are exactly the unit outward normals of
//! the facets of `-C`. Membership, the oriented distance and all the
//! scalarizations work off the dual description; the generators are kept for
//! default interior points and for tests.
//!
//! Dual generators are computed by facet enumeration for `m <= 4`; above that
//! they must be supplied.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{dot, norm, normalized, orthogonal_complement, rank, subsets};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Largest ambient dimension for which facet enumeration is attempted.
pub const MAX_ENUMERATION_DIM: usize = 4;

/// A closed, convex, pointed polyhedral cone with nonempty interior.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderingCone {
    ambient_dim: usize,
    generators: Vec<Vec<f64>>,
    dual_generators: Vec<Vec<f64>>,
    k0: Vec<f64>,
    tol: f64,
}

/// Vertices of the base `G = { ξ ∈ C* : <ξ, k0> = 1 }` of the dual cone.
#[derive(Debug, Clone, PartialEq)]
pub struct DualBase {
    pub vertices: Vec<Vec<f64>>,
}

impl DualBase {
    /// Average of the vertices; lies in the relative interior of `G`.
    pub fn barycenter(&self) -> Vec<f64> {
        let m = self.vertices[0].len();
        let mut out = vec![0.0; m];
        for v in &self.vertices {
            for (o, x) in out.iter_mut().zip(v) {
                *o += x;
            }
        }
        let k = self.vertices.len() as f64;
        out.iter_mut().for_each(|o| *o /= k);
        out
    }
}

impl OrderingCone {
    /// Cone generated by `generators`, with computed dual and default `k0`.
    pub fn new(generators: Vec<Vec<f64>>) -> Result<Self> {
        Self::with_options(generators, None, None)
    }

    /// The nonnegative orthant `R^m_+`.
    pub fn orthant(m: usize) -> Self {
        let gens = (0..m)
            .map(|i| (0..m).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Self::new(gens).expect("the orthant is a valid cone")
    }

    /// Full constructor. `k0` defaults to the normalized sum of the unit
    /// generators; `dual_generators` are normalized when given and enumerated
    /// from the generators otherwise.
    pub fn with_options(
        generators: Vec<Vec<f64>>,
        k0: Option<Vec<f64>>,
        dual_generators: Option<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        Self::build(generators, k0, dual_generators, DEFAULT_TOL)
    }

    fn build(
        generators: Vec<Vec<f64>>,
        k0: Option<Vec<f64>>,
        dual_generators: Option<Vec<Vec<f64>>>,
        tol: f64,
    ) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidCone("no generators".into()));
        }
        let m = generators[0].len();
        if m == 0 {
            return Err(Error::InvalidCone("ambient dimension must be positive".into()));
        }
        for g in &generators {
            check_dim(m, g.len())?;
            if !g.iter().all(|v| v.is_finite()) || norm(g) <= tol {
                return Err(Error::InvalidCone("generators must be finite and nonzero".into()));
            }
        }
        if rank(&generators, 1e-10) < m {
            return Err(Error::InvalidCone("generators do not span R^m: empty interior".into()));
        }

        let dual_generators = match dual_generators {
            Some(duals) => {
                let duals: Vec<Vec<f64>> = duals
                    .into_iter()
                    .map(|g| {
                        check_dim(m, g.len())?;
                        if norm(&g) <= tol {
                            return Err(Error::InvalidCone("zero dual generator".into()));
                        }
                        Ok(normalized(&g))
                    })
                    .collect::<Result<_>>()?;
                check_facet_normals(&generators, &duals, tol)?;
                duals
            }
            None if m <= MAX_ENUMERATION_DIM => enumerate_facets(&generators, tol),
            None => {
                return Err(Error::InvalidCone(format!(
                    "dual generators must be supplied for ambient dimension {m} > {MAX_ENUMERATION_DIM}"
                )))
            }
        };
        if dual_generators.is_empty() || rank(&dual_generators, 1e-10) < m {
            return Err(Error::InvalidCone("cone is not pointed".into()));
        }
        for c in &generators {
            for g in &dual_generators {
                if dot(g, c) < -tol * norm(c).max(1.0) {
                    return Err(Error::InvalidCone(
                        "a generator violates a dual generator inequality".into(),
                    ));
                }
            }
        }

        let k0 = match k0 {
            Some(k) => {
                check_dim(m, k.len())?;
                k
            }
            None => {
                let mut s = vec![0.0; m];
                for g in &generators {
                    let n = norm(g);
                    for (si, gi) in s.iter_mut().zip(g) {
                        *si += gi / n;
                    }
                }
                normalized(&s)
            }
        };
        for (index, g) in dual_generators.iter().enumerate() {
            let value = dot(g, &k0);
            if value <= tol {
                return Err(Error::NotInteriorPoint { index, value });
            }
        }

        Ok(Self {
            ambient_dim: m,
            generators,
            dual_generators,
            k0,
            tol,
        })
    }

    /// Same cone with a different membership tolerance.
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// Same cone with a different interior point.
    pub fn with_k0(&self, k0: Vec<f64>) -> Result<Self> {
        check_dim(self.ambient_dim, k0.len())?;
        for (index, g) in self.dual_generators.iter().enumerate() {
            let value = dot(g, &k0);
            if value <= self.tol {
                return Err(Error::NotInteriorPoint { index, value });
            }
        }
        let mut out = self.clone();
        out.k0 = k0;
        Ok(out)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn generators(&self) -> &[Vec<f64>] {
        &self.generators
    }

    pub fn dual_generators(&self) -> &[Vec<f64>] {
        &self.dual_generators
    }

    pub fn k0(&self) -> &[f64] {
        &self.k0
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// `min_g <g, y>` over the unit dual generators. Nonnegative iff `y ∈ C`.
    pub fn margin(&self, y: &[f64]) -> f64 {
        self.dual_generators
            .iter()
            .map(|g| dot(g, y))
            .fold(f64::INFINITY, f64::min)
    }

    /// Membership in `C` (or in `int C` when `strict`).
    pub fn contains(&self, y: &[f64], strict: bool) -> Result<bool> {
        check_dim(self.ambient_dim, y.len())?;
        Ok(self.contains_unchecked(y, strict))
    }

    #[inline]
    pub(crate) fn contains_unchecked(&self, y: &[f64], strict: bool) -> bool {
        if strict {
            self.dual_generators.iter().all(|g| dot(g, y) > self.tol)
        } else {
            self.dual_generators.iter().all(|g| dot(g, y) >= -self.tol)
        }
    }

    /// Membership of `xi` in the dual cone `C*`.
    pub fn dual_contains(&self, xi: &[f64]) -> Result<bool> {
        check_dim(self.ambient_dim, xi.len())?;
        Ok(self
            .generators
            .iter()
            .all(|c| dot(xi, c) >= -self.tol * norm(c).max(1.0)))
    }

    /// The dual cone: generators and dual generators swap roles.
    pub fn dual_cone(&self) -> OrderingCone {
        let generators = self.dual_generators.clone();
        let dual_generators: Vec<Vec<f64>> = self.generators.iter().map(|g| normalized(g)).collect();
        let mut k0 = vec![0.0; self.ambient_dim];
        for g in &generators {
            for (ki, gi) in k0.iter_mut().zip(g) {
                *ki += gi;
            }
        }
        OrderingCone {
            ambient_dim: self.ambient_dim,
            generators,
            dual_generators,
            k0: normalized(&k0),
            tol: self.tol,
        }
    }

    /// Vertices `g / <g, k0>` of the dual base.
    pub fn base_polytope(&self) -> Result<DualBase> {
        let vertices = self
            .dual_generators
            .iter()
            .enumerate()
            .map(|(index, g)| {
                let value = dot(g, &self.k0);
                if value <= self.tol {
                    Err(Error::NotInteriorPoint { index, value })
                } else {
                    Ok(g.iter().map(|x| x / value).collect())
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DualBase { vertices })
    }

    /// Unit vectors of `C*`. The unit dual generators come first; the rest are
    /// normalized nonnegative combinations of random subsets of them, so that
    /// every face of `C*` receives samples. Returns at least as many vectors as
    /// there are dual generators.
    pub fn sample_dual_sphere(&self, n: usize, seed: u64) -> Vec<Vec<f64>> {
        let k = self.dual_generators.len();
        let mut out: Vec<Vec<f64>> = self.dual_generators.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        while out.len() < n {
            let size = rng.random_range(1..=k);
            let picked = sample(&mut rng, k, size);
            let mut v = vec![0.0; self.ambient_dim];
            for idx in picked.iter() {
                let w: f64 = rng.random_range(f64::EPSILON..1.0);
                for (vi, gi) in v.iter_mut().zip(&self.dual_generators[idx]) {
                    *vi += w * gi;
                }
            }
            let nv = norm(&v);
            if nv > 1e-12 {
                out.push(v.iter().map(|x| x / nv).collect());
            }
        }
        out
    }
}

/// Extreme rays of `C*` by brute force over (m-1)-subsets of generators.
fn enumerate_facets(generators: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let m = generators[0].len();
    let mut found: Vec<Vec<f64>> = Vec::new();
    for subset in subsets(generators.len(), m - 1) {
        let rows: Vec<Vec<f64>> = subset.iter().map(|&i| normalized(&generators[i])).collect();
        let n = orthogonal_complement(&rows, m);
        if norm(&n) <= 1e-10 {
            continue;
        }
        let n = normalized(&n);
        let products: Vec<f64> = generators.iter().map(|c| dot(&n, &normalized(c))).collect();
        let candidate = if products.iter().all(|&p| p >= -tol) {
            n
        } else if products.iter().all(|&p| p <= tol) {
            n.iter().map(|x| -x).collect()
        } else {
            continue;
        };
        let duplicate = found
            .iter()
            .any(|f| f.iter().zip(&candidate).all(|(a, b)| (a - b).abs() <= 1e-9));
        if !duplicate {
            found.push(candidate);
        }
    }
    found
}

/// Each supplied dual generator must be a facet normal: orthogonal to m-1
/// linearly independent generators and nonnegative on all of them.
fn check_facet_normals(generators: &[Vec<f64>], duals: &[Vec<f64>], tol: f64) -> Result<()> {
    let m = generators[0].len();
    for (i, g) in duals.iter().enumerate() {
        let touching: Vec<Vec<f64>> = generators
            .iter()
            .filter(|c| dot(g, c).abs() <= tol * norm(c).max(1.0))
            .cloned()
            .collect();
        if m > 1 && rank(&touching, 1e-10) < m - 1 {
            return Err(Error::InvalidCone(format!(
                "dual generator {i} is not a facet normal of the cone"
            )));
        }
    }
    Ok(())
}

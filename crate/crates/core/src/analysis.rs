//! Structural tests on vector problems: cone convexity, *-quasiconvexity,
//! boundedness from below along a dual functional, and a minimax verifier for
//! bilinear payoffs.
//!
//! Every verdict is evidence gathered from finitely many evaluations. A
//! counterexample always carries a witness that can be re-evaluated directly.

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{check_dim, Error, Result};
use crate::lattice::{BoxDomain, Lattice};
use crate::linalg::{dot, norm};
use crate::problem::VectorProblem;

/// Relative slack for sampled inequalities, scaled by `1 + |values|`.
pub const REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    CConvex,
    StarQuasiconvex,
    CBoundedBelow,
}

impl Property {
    pub fn as_str(self) -> &'static str {
        match self {
            Property::CConvex => "C_convex",
            Property::StarQuasiconvex => "star_quasiconvex",
            Property::CBoundedBelow => "C_bounded_below",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    EvidenceHolds,
    CounterexampleFound,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::EvidenceHolds => "evidence_holds",
            Verdict::CounterexampleFound => "counterexample_found",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// The point `t x + (1 - t) z` violates the tested inequality; `xi` is the
    /// scalarizing functional when one was involved.
    Triple {
        x: Vec<f64>,
        z: Vec<f64>,
        t: f64,
        xi: Option<Vec<f64>>,
        violation: f64,
    },
    /// Lattice minima of `<xi, f>` on the boxes scaled by `factors`.
    Divergence {
        xi: Vec<f64>,
        factors: Vec<f64>,
        minima: Vec<f64>,
        argmins: Vec<Vec<f64>>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructuralVerdict {
    pub property: Property,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub samples_used: usize,
    /// Whether the independent cross-check reached the same verdict (only
    /// meaningful for cone convexity; `true` elsewhere).
    pub routes_agree: bool,
}

const FIXED_T: [f64; 3] = [0.25, 0.5, 0.75];

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (trial as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn draw_triple(domain: &BoxDomain, seed: u64, trial: usize) -> (Vec<f64>, Vec<f64>, f64) {
    let mut rng = trial_rng(seed, trial);
    let x = domain.sample(&mut rng);
    let z = domain.sample(&mut rng);
    let t = if trial % 4 < 3 {
        FIXED_T[trial % 4]
    } else {
        rng.random_range(0.0..1.0)
    };
    (x, z, t)
}

fn mix(x: &[f64], z: &[f64], t: f64) -> Vec<f64> {
    x.iter().zip(z).map(|(a, b)| t * a + (1.0 - t) * b).collect()
}

fn slack(values: &[f64]) -> f64 {
    REL_TOL * (1.0 + values.iter().fold(0.0f64, |m, v| m.max(v.abs())))
}

/// Violation of `f(tx + (1-t)z) ∈ t f(x) + (1-t) f(z) - C`: positive when the
/// membership fails by more than the relative tolerance.
pub fn convexity_violation(p: &VectorProblem, x: &[f64], z: &[f64], t: f64) -> f64 {
    let fx = p.eval(x);
    let fz = p.eval(z);
    let fm = p.eval(&mix(x, z, t));
    let gap: Vec<f64> = (0..fx.len())
        .map(|i| t * fx[i] + (1.0 - t) * fz[i] - fm[i])
        .collect();
    let tol = slack(&[&fx[..], &fz[..], &fm[..]].concat());
    -p.cone().margin(&gap) - tol
}

/// Nodes on `[0, 1]` used by the divided-difference cross-check.
const SEGMENT_NODES: usize = 17;

/// Largest violation of discrete convexity of `<g, f>` along the segment from
/// `z` (parameter 0) to `x` (parameter 1), over every dual generator `g`. The
/// node set contains `t`, so a chord violation at `t` always shows up here.
fn segment_violation(p: &VectorProblem, x: &[f64], z: &[f64], t: f64) -> f64 {
    let mut nodes: Vec<f64> = (0..SEGMENT_NODES)
        .map(|k| k as f64 / (SEGMENT_NODES - 1) as f64)
        .collect();
    if !nodes.iter().any(|&s| s == t) {
        nodes.push(t);
        nodes.sort_by(f64::total_cmp);
    }
    let values: Vec<Vec<f64>> = nodes.iter().map(|&s| p.eval(&mix(x, z, s))).collect();
    let flat: Vec<f64> = values.iter().flatten().copied().collect();
    let tol = slack(&flat);
    let mut worst = f64::NEG_INFINITY;
    for g in p.cone().dual_generators() {
        let phi: Vec<f64> = values.iter().map(|v| dot(g, v)).collect();
        for k in 1..nodes.len() - 1 {
            let (a, b, c) = (nodes[k - 1], nodes[k], nodes[k + 1]);
            let chord = ((c - b) * phi[k - 1] + (b - a) * phi[k + 1]) / (c - a);
            worst = worst.max(phi[k] - chord - tol);
        }
    }
    worst
}

/// Sampled test of cone convexity with a dual-generator cross-check.
pub fn is_c_convex(p: &VectorProblem, trials: usize, seed: u64) -> Result<StructuralVerdict> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    let results: Vec<(f64, f64)> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let (x, z, t) = draw_triple(p.domain(), seed, k);
            (convexity_violation(p, &x, &z, t), segment_violation(p, &x, &z, t))
        })
        .collect();
    let first = results.iter().position(|(v, _)| *v > 0.0);
    let second = results.iter().any(|(_, v)| *v > 0.0);
    let witness = first.map(|k| {
        let (x, z, t) = draw_triple(p.domain(), seed, k);
        Witness::Triple {
            x,
            z,
            t,
            xi: None,
            violation: results[k].0,
        }
    });
    Ok(StructuralVerdict {
        property: Property::CConvex,
        verdict: if first.is_some() {
            Verdict::CounterexampleFound
        } else {
            Verdict::EvidenceHolds
        },
        witness,
        samples_used: trials,
        routes_agree: first.is_some() == second,
    })
}

/// Base vertices followed by random points of the dual base (uniform weights
/// over the vertices), `count` in total but never fewer than the vertices.
pub fn sample_dual_base(p: &VectorProblem, count: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    let base = p.cone().base_polytope()?;
    let mut out = base.vertices.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = p.objective_dim();
    while out.len() < count {
        let weights: Vec<f64> = base
            .vertices
            .iter()
            .map(|_| -rng.random_range(f64::EPSILON..1.0f64).ln())
            .collect();
        let total: f64 = weights.iter().sum();
        let mut xi = vec![0.0; m];
        for (w, v) in weights.iter().zip(&base.vertices) {
            for (a, b) in xi.iter_mut().zip(v) {
                *a += w / total * b;
            }
        }
        out.push(xi);
    }
    Ok(out)
}

/// Violation of `<xi, f(tx + (1-t)z)> <= max(<xi, f(x)>, <xi, f(z)>)`.
pub fn quasiconvexity_violation(p: &VectorProblem, xi: &[f64], x: &[f64], z: &[f64], t: f64) -> f64 {
    let gx = dot(xi, &p.eval(x));
    let gz = dot(xi, &p.eval(z));
    let gm = dot(xi, &p.eval(&mix(x, z, t)));
    gm - gx.max(gz) - slack(&[gx, gz, gm])
}

/// Sampled test of quasiconvexity of `<xi, f>` for functionals of the dual base.
pub fn is_star_quasiconvex(
    p: &VectorProblem,
    dual_samples: usize,
    trials: usize,
    seed: u64,
) -> Result<StructuralVerdict> {
    if dual_samples == 0 || trials == 0 {
        return Err(Error::InvalidInput("sample counts must be at least 1".into()));
    }
    let xis = sample_dual_base(p, dual_samples, seed)?;
    let total = xis.len() * trials;
    let violations: Vec<f64> = (0..total)
        .into_par_iter()
        .map(|k| {
            let (x, z, t) = draw_triple(p.domain(), seed, k % trials);
            quasiconvexity_violation(p, &xis[k / trials], &x, &z, t)
        })
        .collect();
    let first = violations.iter().position(|v| *v > 0.0);
    let witness = first.map(|k| {
        let (x, z, t) = draw_triple(p.domain(), seed, k % trials);
        Witness::Triple {
            x,
            z,
            t,
            xi: Some(xis[k / trials].clone()),
            violation: violations[k],
        }
    });
    Ok(StructuralVerdict {
        property: Property::StarQuasiconvex,
        verdict: if first.is_some() {
            Verdict::CounterexampleFound
        } else {
            Verdict::EvidenceHolds
        },
        witness,
        samples_used: total,
        routes_agree: true,
    })
}

/// Settings for the expanding-box boundedness test.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundedBelowOptions {
    /// Increasing expansion factors of the domain box about its center.
    pub box_schedule: Vec<f64>,
    /// Points per axis on the unexpanded box; expanded boxes keep the spacing
    /// when the lattice stays under `max_points`.
    pub grid_resolution: usize,
    pub max_points: usize,
    /// Minima that move less than this between the last two boxes count as settled.
    pub stabilization_tol: f64,
    /// Minima that drop by more than this per expansion on the last two steps
    /// count as divergence.
    pub divergence_slope: f64,
}

impl Default for BoundedBelowOptions {
    fn default() -> Self {
        Self {
            box_schedule: vec![1.0, 2.0, 4.0, 8.0],
            grid_resolution: 41,
            max_points: 4_000_000,
            stabilization_tol: 1e-6,
            divergence_slope: 1.0,
        }
    }
}

impl BoundedBelowOptions {
    pub fn with_resolution(mut self, grid_resolution: usize) -> Self {
        self.grid_resolution = grid_resolution;
        self
    }
}

fn expanded_resolution(base: usize, factor: f64, dim: usize, max_points: usize) -> usize {
    let nested = ((base - 1) as f64 * factor).round() as usize + 1;
    let cap = (max_points as f64).powf(1.0 / dim as f64).floor() as usize;
    nested.min(cap.max(base)).max(2)
}

/// Running lattice minima of `<xi, f>` over the expanded boxes.
pub fn expanding_minima(
    p: &VectorProblem,
    xi: &[f64],
    opts: &BoundedBelowOptions,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    check_dim(p.objective_dim(), xi.len())?;
    let mut minima = Vec::new();
    let mut argmins: Vec<Vec<f64>> = Vec::new();
    for &factor in &opts.box_schedule {
        if !(factor >= 1.0 && factor.is_finite()) {
            return Err(Error::InvalidInput("expansion factors must be at least 1".into()));
        }
        let domain = p.domain().expanded(factor);
        let res = expanded_resolution(opts.grid_resolution, factor, p.decision_dim(), opts.max_points);
        let lattice = Lattice::new(&domain, res)?;
        let (idx, value) = lattice.argmin(|x| dot(xi, &p.eval(x)));
        match minima.last() {
            Some(&prev) if prev <= value => {
                minima.push(prev);
                let last = argmins.last().cloned().unwrap_or_default();
                argmins.push(last);
            }
            _ => {
                minima.push(value);
                argmins.push(lattice.point(idx));
            }
        }
    }
    Ok((minima, argmins))
}

/// Evidence on whether `<xi, f>` is bounded below, from lattice minima on boxes
/// that grow by the factors in `opts.box_schedule`.
pub fn is_c_bounded_below(
    p: &VectorProblem,
    xi: &[f64],
    opts: &BoundedBelowOptions,
) -> Result<StructuralVerdict> {
    check_dim(p.objective_dim(), xi.len())?;
    if norm(xi) == 0.0 || !p.cone().dual_contains(xi)? {
        return Err(Error::InvalidInput("functional must lie in the dual cone and be nonzero".into()));
    }
    if opts.box_schedule.len() < 2 {
        return Err(Error::InvalidInput("box schedule needs at least two factors".into()));
    }
    let (minima, argmins) = expanding_minima(p, xi, opts)?;
    let n = minima.len();
    let drops: Vec<f64> = minima.windows(2).map(|w| w[0] - w[1]).collect();
    let last = drops[n - 2];
    let verdict = if !minima[n - 1].is_finite() {
        Verdict::CounterexampleFound
    } else if last < opts.stabilization_tol {
        Verdict::EvidenceHolds
    } else if drops.len() >= 2
        && drops[drops.len() - 2..].iter().all(|d| *d > opts.divergence_slope)
    {
        Verdict::CounterexampleFound
    } else {
        Verdict::Inconclusive
    };
    let witness = (verdict == Verdict::CounterexampleFound).then(|| Witness::Divergence {
        xi: xi.to_vec(),
        factors: opts.box_schedule.clone(),
        minima: minima.clone(),
        argmins,
    });
    Ok(StructuralVerdict {
        property: Property::CBoundedBelow,
        verdict,
        witness,
        samples_used: n,
        routes_agree: true,
    })
}

/// First functional of the dual base (vertices, then the barycenter, then
/// `candidates` random base points) along which `f` shows bounded-below evidence.
pub fn find_bounding_functional(
    p: &VectorProblem,
    candidates: usize,
    seed: u64,
    opts: &BoundedBelowOptions,
) -> Result<Option<Vec<f64>>> {
    let base = p.cone().base_polytope()?;
    let mut list = base.vertices.clone();
    list.push(base.barycenter());
    let vertices = base.vertices.len();
    let extra = sample_dual_base(p, vertices + candidates, seed)?;
    list.extend(extra.into_iter().skip(vertices));
    for xi in list {
        if is_c_bounded_below(p, &xi, opts)?.verdict == Verdict::EvidenceHolds {
            return Ok(Some(xi));
        }
    }
    Ok(None)
}

/// The second player's set in the minimax check.
#[derive(Debug, Clone, PartialEq)]
pub enum SionDomain {
    Box(BoxDomain),
    /// Probability simplex of the given dimension.
    Simplex(usize),
}

impl SionDomain {
    pub fn dim(&self) -> usize {
        match self {
            SionDomain::Box(b) => b.dim(),
            SionDomain::Simplex(n) => *n,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SionResult {
    /// `sup_z inf_w zᵀAw` over a simplex lattice (a lower bound on the value).
    pub sup_inf: f64,
    /// `inf_w sup_z zᵀAw` over a lattice of `W` (an upper bound on the value).
    pub inf_sup: f64,
    /// Bound on how far each lattice optimum can sit from the exact one.
    pub lattice_error: f64,
    /// Game value from the exact linear program.
    pub lp_value: f64,
}

/// Points per unit of the simplex lattice `{ k / n : Σ k = n }`.
fn simplex_divisions(dim: usize) -> usize {
    match dim {
        1 => 1,
        2 => 2000,
        3 => 200,
        _ => 60,
    }
}

fn simplex_lattice(dim: usize, n: usize) -> Vec<Vec<f64>> {
    fn rec(dim: usize, left: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if cur.len() == dim - 1 {
            cur.push(left);
            out.push(cur.iter().map(|&k| k as f64 / n as f64).collect());
            cur.pop();
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(dim, left - k, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, n, n, &mut Vec::with_capacity(dim), &mut out);
    out
}

fn box_resolution(dim: usize) -> usize {
    match dim {
        1 => 4001,
        2 => 401,
        3 => 61,
        _ => 25,
    }
}

fn inner_inf(c: &[f64], w: &SionDomain) -> f64 {
    match w {
        SionDomain::Box(b) => c
            .iter()
            .zip(b.lower().iter().zip(b.upper()))
            .map(|(ci, (l, u))| (ci * l).min(ci * u))
            .sum(),
        SionDomain::Simplex(_) => c.iter().copied().fold(f64::INFINITY, f64::min),
    }
}

fn mat_t_vec(a: &[Vec<f64>], z: &[f64]) -> Vec<f64> {
    let q = a[0].len();
    let mut c = vec![0.0; q];
    for (zi, row) in z.iter().zip(a) {
        for (cj, aij) in c.iter_mut().zip(row) {
            *cj += zi * aij;
        }
    }
    c
}

fn mat_vec_max(a: &[Vec<f64>], w: &[f64]) -> f64 {
    a.iter().map(|row| dot(row, w)).fold(f64::NEG_INFINITY, f64::max)
}

/// Exact value of the game `max_z min_w zᵀAw` by linear programming.
pub fn game_value_lp(a: &[Vec<f64>], w: &SionDomain) -> Result<f64> {
    let p = a.len();
    let q = a[0].len();
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let zs: Vec<_> = (0..p).map(|_| lp.add_var(0.0, (0.0, f64::INFINITY))).collect();
    let ones: Vec<_> = zs.iter().map(|&v| (v, 1.0)).collect();
    lp.add_constraint(&ones, ComparisonOp::Eq, 1.0);
    match w {
        SionDomain::Box(b) => {
            // t_j <= c_j l_j and t_j <= c_j u_j with c = Aᵀz
            for j in 0..q {
                let t = lp.add_var(1.0, (f64::NEG_INFINITY, f64::INFINITY));
                for bound in [b.lower()[j], b.upper()[j]] {
                    let mut row: Vec<_> = zs.iter().enumerate().map(|(i, &v)| (v, -a[i][j] * bound)).collect();
                    row.push((t, 1.0));
                    lp.add_constraint(&row, ComparisonOp::Le, 0.0);
                }
            }
        }
        SionDomain::Simplex(_) => {
            let v = lp.add_var(1.0, (f64::NEG_INFINITY, f64::INFINITY));
            for j in 0..q {
                let mut row: Vec<_> = zs.iter().enumerate().map(|(i, &zv)| (zv, -a[i][j])).collect();
                row.push((v, 1.0));
                lp.add_constraint(&row, ComparisonOp::Le, 0.0);
            }
        }
    }
    let solution = lp
        .solve()
        .map_err(|e| Error::NumericalFailure(format!("linear program failed: {e}")))?;
    Ok(solution.objective())
}

/// Both sides of the minimax equality for `g(z, w) = zᵀAw`, `z` in the
/// probability simplex and `w` in `w_set`. Inner problems are solved exactly;
/// outer ones on lattices, with the exact LP value as a cross-check.
pub fn sion_gap(a: &[Vec<f64>], w_set: &SionDomain) -> Result<SionResult> {
    let p = a.len();
    if p == 0 || a[0].is_empty() {
        return Err(Error::InvalidInput("payoff matrix must be nonempty".into()));
    }
    let q = a[0].len();
    for row in a {
        check_dim(q, row.len())?;
    }
    check_dim(q, w_set.dim())?;

    let nz = simplex_divisions(p);
    let zs = simplex_lattice(p, nz);
    let sup_inf = zs
        .par_iter()
        .map(|z| inner_inf(&mat_t_vec(a, z), w_set))
        .reduce(|| f64::NEG_INFINITY, f64::max);

    let (inf_sup, err_w) = match w_set {
        SionDomain::Box(b) => {
            let lattice = Lattice::new(b, box_resolution(q))?;
            let v = lattice
                .map(|w| mat_vec_max(a, w))
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            let h: Vec<f64> = (0..q)
                .map(|j| (b.upper()[j] - b.lower()[j]) / (lattice.resolution() - 1) as f64)
                .collect();
            let err = a
                .iter()
                .map(|row| row.iter().zip(&h).map(|(x, hj)| x.abs() * hj / 2.0).sum::<f64>())
                .fold(0.0, f64::max);
            (v, err)
        }
        SionDomain::Simplex(_) => {
            let nw = simplex_divisions(q);
            let v = simplex_lattice(q, nw)
                .par_iter()
                .map(|w| mat_vec_max(a, w))
                .reduce(|| f64::INFINITY, f64::min);
            let amax = a.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
            (v, amax * 2.0 * q as f64 / nw as f64)
        }
    };

    // |inf_w zᵀAw - inf_w z'ᵀAw| <= max_w |Aw|_inf |z - z'|_1, and every simplex
    // point is within l1 distance 2p/n of the lattice.
    let w_extent = match w_set {
        SionDomain::Box(b) => b
            .lower()
            .iter()
            .zip(b.upper())
            .map(|(l, u)| l.abs().max(u.abs()))
            .collect::<Vec<_>>(),
        SionDomain::Simplex(_) => vec![1.0; q],
    };
    let l_z = a
        .iter()
        .map(|row| row.iter().zip(&w_extent).map(|(x, e)| x.abs() * e).sum::<f64>())
        .fold(0.0, f64::max);
    let err_z = if p == 1 { 0.0 } else { l_z * 2.0 * p as f64 / nz as f64 };

    Ok(SionResult {
        sup_inf,
        inf_sup,
        lattice_error: err_z + err_w,
        lp_value: game_value_lp(a, w_set)?,
    })
}

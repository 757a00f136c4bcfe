//! Efficiency classification and well-posedness diagnostics on lattices.
//!
//! Level-set diameters are computed from one lattice scan per scalar function:
//! the scan keeps every point below the loosest level, and tighter levels are
//! filtered from that list, so the sets are nested by construction and the
//! diameter curves are nonincreasing.

use rayon::prelude::*;

use crate::distance::oriented_value;
use crate::error::{check_dim, Error, Result};
use crate::lattice::Lattice;
use crate::linalg::{dist, dot, norm, normalized, sub};
use crate::problem::{scalarize_linear, scalarize_oriented, ScalarProblem, VectorProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriState {
    Yes,
    No,
    Inconclusive,
}

impl TriState {
    pub fn as_str(self) -> &'static str {
        match self {
            TriState::Yes => "yes",
            TriState::No => "no",
            TriState::Inconclusive => "inconclusive",
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            TriState::Yes => Some(true),
            TriState::No => Some(false),
            TriState::Inconclusive => None,
        }
    }
}

/// `2^0, 2^-1, ..., 2^-depth`
pub fn geometric_schedule(depth: u32) -> Vec<f64> {
    (0..=depth).map(|k| 0.5f64.powi(k as i32)).collect()
}

/// Depth of the default level and α schedules.
pub const DEFAULT_SCHEDULE_DEPTH: u32 = 30;
/// Depth of the ε grid in the strict-efficiency test.
pub const STEFF_EPS_DEPTH: u32 = 6;
/// Depth of the δ grid in the strict-efficiency test.
pub const STEFF_DELTA_DEPTH: u32 = 20;

pub fn default_schedule() -> Vec<f64> {
    geometric_schedule(DEFAULT_SCHEDULE_DEPTH)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyVerdict {
    pub point: Vec<f64>,
    pub efficient: TriState,
    pub weakly_efficient: TriState,
    pub strictly_efficient: TriState,
    /// Lattice point whose image dominates: `f(x) - f(x̄) ∈ -C`, nonzero.
    pub dominating_witness: Option<Vec<f64>>,
    /// Lattice point with `f(x) - f(x̄) ∈ -int C`.
    pub strict_witness: Option<Vec<f64>>,
    /// For each ε of the strict-efficiency grid, the largest grid δ that works.
    pub steff_deltas: Vec<(f64, Option<f64>)>,
    pub grid_resolution: usize,
    pub grid_spacing: f64,
    pub tol: f64,
}

/// Efficient, weakly efficient and strictly efficient evidence for `x̄` against
/// every lattice point.
///
/// Strict efficiency follows its image-space definition: for each ε of the
/// grid there must be a grid δ with `(f(X) - f(x̄)) ∩ (δB - C) ⊆ εB`. A point
/// with image in `x̄`'s image minus `C` belongs to every such intersection, so
/// one far from `f(x̄)` settles "no"; if the needed δ is below the grid the
/// answer is inconclusive.
pub fn classify_point(
    p: &VectorProblem,
    xbar: &[f64],
    grid_resolution: usize,
    tol: f64,
) -> Result<EfficiencyVerdict> {
    check_dim(p.decision_dim(), xbar.len())?;
    if !p.domain().contains(xbar) {
        return Err(Error::InvalidInput("point outside the domain".into()));
    }
    let lattice = Lattice::new(p.domain(), grid_resolution)?;
    let cone = p.cone();
    let fbar = p.eval(xbar);
    // (oriented distance, image gap, dominated, strictly dominated)
    let rows: Vec<(f64, f64, bool, bool)> = lattice.map(|x| {
        let diff = sub(&p.eval(x), &fbar);
        let neg: Vec<f64> = diff.iter().map(|v| -v).collect();
        let gap = norm(&diff);
        let dominated = gap > tol && cone.contains_unchecked(&neg, false);
        let strictly = cone.margin(&neg) > tol;
        let d = oriented_value(cone, &diff).unwrap_or(f64::NAN);
        (d, gap, dominated, strictly)
    });

    let dominating = rows.iter().position(|r| r.2);
    let strict = rows.iter().position(|r| r.3);
    let efficient = if dominating.is_some() { TriState::No } else { TriState::Yes };
    let weakly_efficient = if strict.is_some() { TriState::No } else { TriState::Yes };

    let mut steff_deltas = Vec::new();
    let mut strictly_efficient = TriState::Yes;
    for eps in geometric_schedule(STEFF_EPS_DEPTH) {
        // δ must stay below the oriented distance of every image farther than ε
        let bound = rows
            .iter()
            .filter(|r| r.1 > eps.max(tol))
            .map(|r| if r.0.is_nan() { f64::NEG_INFINITY } else { r.0 })
            .fold(f64::INFINITY, f64::min);
        if bound <= 0.0 {
            strictly_efficient = TriState::No;
            steff_deltas.push((eps, None));
            continue;
        }
        let delta = geometric_schedule(STEFF_DELTA_DEPTH)
            .into_iter()
            .find(|&d| d < bound);
        if delta.is_none() && strictly_efficient == TriState::Yes {
            strictly_efficient = TriState::Inconclusive;
        }
        steff_deltas.push((eps, delta));
    }
    if efficient == TriState::No {
        strictly_efficient = TriState::No;
    }

    Ok(EfficiencyVerdict {
        point: xbar.to_vec(),
        efficient,
        weakly_efficient,
        strictly_efficient,
        dominating_witness: dominating.map(|i| lattice.point(i)),
        strict_witness: strict.map(|i| lattice.point(i)),
        steff_deltas,
        grid_resolution,
        grid_spacing: lattice.spacing(),
        tol,
    })
}

/// Weak efficiency through the oriented distance: `x̄` is weakly efficient iff
/// it minimizes `D(f(·) - f(x̄))`, whose value at `x̄` is 0.
pub fn weff_via_distance(p: &VectorProblem, xbar: &[f64], grid_resolution: usize, tol: f64) -> Result<bool> {
    let sp = scalarize_oriented(p, xbar)?;
    let lattice = Lattice::new(p.domain(), grid_resolution)?;
    let (_, min) = lattice.argmin(|x| sp.eval(x));
    Ok(min.min(0.0) >= -tol)
}

/// [`weff_via_distance`] for every lattice point at once, indexed like the
/// lattice. Images are computed once; each scan visits candidates by
/// increasing `<ξ, f>` for an interior dual functional `ξ` and stops at the
/// first `D(f(x) - f(x̄)) < -tol`. The order only affects running time.
pub fn weff_set_via_distance(p: &VectorProblem, grid_resolution: usize, tol: f64) -> Result<Vec<bool>> {
    let lattice = Lattice::new(p.domain(), grid_resolution)?;
    let cone = p.cone();
    let images = lattice.map(|x| p.eval(x));
    let xi = cone.base_polytope()?.barycenter();
    let mut order: Vec<usize> = (0..images.len()).collect();
    let key: Vec<f64> = images.iter().map(|y| dot(&xi, y)).collect();
    order.sort_by(|&a, &b| key[a].total_cmp(&key[b]).then(a.cmp(&b)));
    Ok(images
        .par_iter()
        .map(|fbar| {
            !order.iter().any(|&j| {
                let d = oriented_value(cone, &sub(&images[j], fbar)).unwrap_or(f64::NAN);
                d < -tol
            })
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportKind {
    Tykhonov,
    Dh,
}

impl ReportKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ReportKind::Tykhonov => "tykhonov",
            ReportKind::Dh => "dh",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WpVerdict {
    WellPosedEvidence,
    NotWellPosedEvidence,
    Inconclusive,
}

impl WpVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            WpVerdict::WellPosedEvidence => "well_posed_evidence",
            WpVerdict::NotWellPosedEvidence => "not_well_posed_evidence",
            WpVerdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub tol_abs: f64,
    pub decay_ratio: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            tol_abs: 1e-3,
            decay_ratio: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiamEntry {
    pub level: f64,
    pub direction_index: usize,
    pub diameter: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WellPosednessReport {
    pub kind: ReportKind,
    pub point: Option<Vec<f64>>,
    /// Offsets above the lattice infimum (Tykhonov) or α values (DH).
    pub schedule: Vec<f64>,
    pub directions: Vec<Vec<f64>>,
    /// Ordered by direction, then by schedule index.
    pub diam_curve: Vec<DiamEntry>,
    pub direction_verdicts: Vec<WpVerdict>,
    pub verdict: WpVerdict,
    pub thresholds: Thresholds,
    pub grid_resolution: usize,
    pub grid_spacing: f64,
    /// Lattice infimum and its lowest-index minimizer (Tykhonov only).
    pub infimum: Option<f64>,
    pub argmin: Option<Vec<f64>>,
}

impl WellPosednessReport {
    /// Diameters of one direction's curve in schedule order.
    pub fn curve(&self, direction_index: usize) -> Vec<f64> {
        self.diam_curve
            .iter()
            .filter(|e| e.direction_index == direction_index)
            .map(|e| e.diameter)
            .collect()
    }
}

fn validate_schedule(schedule: &[f64]) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::InvalidInput("schedule must not be empty".into()));
    }
    if schedule.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidInput("schedule values must be positive".into()));
    }
    if schedule.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidInput("schedule must be strictly decreasing".into()));
    }
    Ok(())
}

/// Diameter and size of `{ x : value(x) <= t }` for each threshold, over the
/// lattice plus `extras`.
fn nested_diameters<F>(
    lattice: &Lattice,
    value: F,
    extras: &[(Vec<f64>, f64)],
    thresholds: &[f64],
) -> Vec<(f64, usize)>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let top = thresholds.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let below = lattice.collect_below(&value, top);
    let mut pts: Vec<(Vec<f64>, f64)> = below.into_iter().map(|(i, v)| (lattice.point(i), v)).collect();
    pts.extend(extras.iter().filter(|(_, v)| *v <= top).cloned());
    thresholds
        .par_iter()
        .map(|&t| {
            let set: Vec<Vec<f64>> = pts.iter().filter(|(_, v)| *v <= t).map(|(x, _)| x.clone()).collect();
            (crate::diameter::diameter(&set), set.len())
        })
        .collect()
}

fn curve_verdict(curve: &[f64], spacing: f64, th: &Thresholds) -> WpVerdict {
    let first = curve[0];
    let last = *curve.last().unwrap_or(&first);
    let floor = th.tol_abs + 2.0 * spacing;
    if last <= floor && last <= th.decay_ratio * first {
        return WpVerdict::WellPosedEvidence;
    }
    if last > floor && curve.len() >= 2 {
        let prev = curve[curve.len() - 2];
        if (prev - last).abs() <= 2.0 * spacing {
            return WpVerdict::NotWellPosedEvidence;
        }
    }
    WpVerdict::Inconclusive
}

fn combine(verdicts: &[WpVerdict]) -> WpVerdict {
    if verdicts.contains(&WpVerdict::NotWellPosedEvidence) {
        WpVerdict::NotWellPosedEvidence
    } else if verdicts.iter().all(|v| *v == WpVerdict::WellPosedEvidence) {
        WpVerdict::WellPosedEvidence
    } else {
        WpVerdict::Inconclusive
    }
}

/// Furi–Vignoli test: diameters of `{ sp <= inf + ε_k }` on the lattice.
pub fn tykhonov_diagnostic(
    sp: &ScalarProblem,
    level_schedule: &[f64],
    grid_resolution: usize,
    thresholds: &Thresholds,
) -> Result<WellPosednessReport> {
    validate_schedule(level_schedule)?;
    let lattice = Lattice::new(sp.domain(), grid_resolution)?;
    let value = |x: &[f64]| {
        let v = sp.eval(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let (idx, mut inf) = lattice.argmin(value);
    let mut argmin = lattice.point(idx);
    let mut extras = Vec::new();
    if let Some(a) = sp.anchor() {
        let va = value(a);
        if va < inf {
            inf = va;
            argmin = a.to_vec();
        }
        extras.push((a.to_vec(), va));
    }
    if !inf.is_finite() {
        return Err(Error::NumericalFailure("objective is not finite on the lattice".into()));
    }
    let thresholds_abs: Vec<f64> = level_schedule.iter().map(|e| inf + e).collect();
    let diams = nested_diameters(&lattice, value, &extras, &thresholds_abs);
    if diams.iter().any(|(_, n)| *n == 0) {
        return Err(Error::NumericalFailure("empty level set above the infimum".into()));
    }
    let curve: Vec<f64> = diams.iter().map(|d| d.0).collect();
    let verdict = curve_verdict(&curve, lattice.spacing(), thresholds);
    Ok(WellPosednessReport {
        kind: ReportKind::Tykhonov,
        point: None,
        schedule: level_schedule.to_vec(),
        directions: Vec::new(),
        diam_curve: level_schedule
            .iter()
            .zip(&diams)
            .map(|(l, (d, n))| DiamEntry {
                level: *l,
                direction_index: 0,
                diameter: *d,
                points: *n,
            })
            .collect(),
        direction_verdicts: vec![verdict],
        verdict,
        thresholds: *thresholds,
        grid_resolution,
        grid_spacing: lattice.spacing(),
        infimum: Some(inf),
        argmin: Some(argmin),
    })
}

/// `k0` plus, for each generator `c_i` of the cone,
/// `0.9 * normalized(Σ normalized generators) + 0.1 * normalized(c_i)`, deduplicated.
pub fn default_directions(p: &VectorProblem) -> Vec<Vec<f64>> {
    let cone = p.cone();
    let m = p.objective_dim();
    let unit: Vec<Vec<f64>> = cone.generators().iter().map(|g| normalized(g)).collect();
    let mut sum = vec![0.0; m];
    for g in &unit {
        for (s, v) in sum.iter_mut().zip(g) {
            *s += v;
        }
    }
    let center = normalized(&sum);
    let mut out = vec![cone.k0().to_vec()];
    for g in &unit {
        let c: Vec<f64> = center.iter().zip(g).map(|(a, b)| 0.9 * a + 0.1 * b).collect();
        if !out.iter().any(|o| dist(o, &c) <= 1e-12) {
            out.push(c);
        }
    }
    out
}

/// DH test at `x̄`: diameters of `L(f(x̄) + αc)` for each direction and α.
pub fn dh_diagnostic(
    p: &VectorProblem,
    xbar: &[f64],
    directions: &[Vec<f64>],
    alpha_schedule: &[f64],
    grid_resolution: usize,
    thresholds: &Thresholds,
) -> Result<WellPosednessReport> {
    check_dim(p.decision_dim(), xbar.len())?;
    if !p.domain().contains(xbar) {
        return Err(Error::InvalidInput("point outside the domain".into()));
    }
    validate_schedule(alpha_schedule)?;
    if directions.is_empty() {
        return Err(Error::InvalidInput("at least one direction is required".into()));
    }
    let cone = p.cone();
    for c in directions {
        if !cone.contains(c, true)? {
            return Err(Error::InvalidInput(format!(
                "direction {c:?} is not in the interior of the cone"
            )));
        }
    }
    let lattice = Lattice::new(p.domain(), grid_resolution)?;
    let fbar = p.eval(xbar);
    let tol = cone.tol();
    let mut diam_curve = Vec::new();
    let mut direction_verdicts = Vec::new();
    for (ci, c) in directions.iter().enumerate() {
        let gc: Vec<f64> = cone.dual_generators().iter().map(|g| dot(g, c)).collect();
        // smallest α with f(x) ∈ f(x̄) + αc - C (membership up to the cone tolerance)
        let alpha_star = |x: &[f64]| -> f64 {
            let diff = sub(&p.eval(x), &fbar);
            cone.dual_generators()
                .iter()
                .zip(&gc)
                .map(|(g, gcv)| (dot(g, &diff) - tol) / gcv)
                .fold(f64::NEG_INFINITY, f64::max)
        };
        let extras = vec![(xbar.to_vec(), alpha_star(xbar))];
        let diams = nested_diameters(&lattice, alpha_star, &extras, alpha_schedule);
        let curve: Vec<f64> = diams.iter().map(|d| d.0).collect();
        direction_verdicts.push(curve_verdict(&curve, lattice.spacing(), thresholds));
        for (a, (d, n)) in alpha_schedule.iter().zip(diams) {
            diam_curve.push(DiamEntry {
                level: *a,
                direction_index: ci,
                diameter: d,
                points: n,
            });
        }
    }
    Ok(WellPosednessReport {
        kind: ReportKind::Dh,
        point: Some(xbar.to_vec()),
        schedule: alpha_schedule.to_vec(),
        directions: directions.to_vec(),
        diam_curve,
        verdict: combine(&direction_verdicts),
        direction_verdicts,
        thresholds: *thresholds,
        grid_resolution,
        grid_spacing: lattice.spacing(),
        infimum: None,
        argmin: None,
    })
}

/// Tykhonov test of `x ↦ D(f(x) - f(x̄))`; DH well-posedness at an efficient
/// `x̄` is equivalent to its well-posedness.
pub fn dh_via_scalarization(
    p: &VectorProblem,
    xbar: &[f64],
    level_schedule: &[f64],
    grid_resolution: usize,
    thresholds: &Thresholds,
) -> Result<WellPosednessReport> {
    let sp = scalarize_oriented(p, xbar)?;
    let mut report = tykhonov_diagnostic(&sp, level_schedule, grid_resolution, thresholds)?;
    report.point = Some(xbar.to_vec());
    Ok(report)
}

/// Sufficient test for DH well-posedness: `<ξ, f>` is Tykhonov well-posed with
/// its lattice minimizer at `x̄` (within half a lattice step).
pub fn dh_sufficient_linear(
    p: &VectorProblem,
    xbar: &[f64],
    xi: &[f64],
    level_schedule: &[f64],
    grid_resolution: usize,
    thresholds: &Thresholds,
) -> Result<bool> {
    check_dim(p.decision_dim(), xbar.len())?;
    if !p.domain().contains(xbar) {
        return Err(Error::InvalidInput("point outside the domain".into()));
    }
    let sp = scalarize_linear(p, xi)?.with_anchor(xbar.to_vec());
    let report = tykhonov_diagnostic(&sp, level_schedule, grid_resolution, thresholds)?;
    let at_xbar = report
        .argmin
        .as_ref()
        .is_some_and(|a| dist(a, xbar) <= 0.5 * report.grid_spacing);
    Ok(report.verdict == WpVerdict::WellPosedEvidence && at_xbar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::OrderingCone;
    use crate::lattice::BoxDomain;

    fn problem<F>(a: f64, b: f64, f: F) -> VectorProblem
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        VectorProblem::new("t", BoxDomain::interval(a, b).unwrap(), OrderingCone::orthant(2), f).unwrap()
    }

    #[test]
    fn batch_weak_efficiency_matches_single_points() {
        let p = problem(-2.0, 2.0, |x| vec![x[0], (x[0] - 1.0).powi(2)]);
        let all = weff_set_via_distance(&p, 41, 1e-9).unwrap();
        let lattice = Lattice::new(p.domain(), 41).unwrap();
        for (i, w) in all.iter().enumerate() {
            assert_eq!(*w, weff_via_distance(&p, &lattice.point(i), 41, 1e-9).unwrap());
        }
        // weakly efficient exactly on [-2, 1]
        assert_eq!(all.iter().filter(|w| **w).count(), 31);
    }

    fn xex() -> VectorProblem {
        problem(-10.0, 10.0, |x| vec![x[0], -x[0] * x[0].exp()])
    }

    #[test]
    fn classify_xex() {
        let v = classify_point(&xex(), &[1.0], 401, 1e-9).unwrap();
        assert_eq!(v.efficient, TriState::Yes);
        assert_eq!(v.weakly_efficient, TriState::Yes);
        let v = classify_point(&xex(), &[-1.0], 401, 1e-9).unwrap();
        assert_eq!(v.efficient, TriState::No);
        let w = v.dominating_witness.unwrap();
        assert!(w[0] < -1.0);
        let p = xex();
        let d = sub(&p.eval(&w), &p.eval(&[-1.0]));
        assert!(d.iter().all(|v| *v <= 0.0) && norm(&d) > 0.0);
        assert!(!weff_via_distance(&p, &[-1.0], 401, 1e-9).unwrap());
        assert!(classify_point(&p, &[11.0], 11, 1e-9).is_err());
    }

    #[test]
    fn classify_zero() {
        let z = problem(-1.0, 1.0, |_| vec![0.0, 0.0]);
        for x in [-1.0, 0.0, 0.3] {
            let v = classify_point(&z, &[x], 21, 1e-9).unwrap();
            assert_eq!(v.efficient, TriState::Yes);
            assert_eq!(v.strictly_efficient, TriState::Yes);
        }
    }

    #[test]
    fn tykhonov_square_and_zero() {
        let th = Thresholds::default();
        let sq = ScalarProblem::new("sq", BoxDomain::interval(-2.0, 2.0).unwrap(), |x| x[0] * x[0]);
        let r = tykhonov_diagnostic(&sq, &default_schedule(), 201, &th).unwrap();
        assert_eq!(r.verdict, WpVerdict::WellPosedEvidence);
        let curve = r.curve(0);
        assert!(curve.windows(2).all(|w| w[1] <= w[0]));
        // level 1/4 above the infimum: |x| <= 1/2
        assert!((curve[2] - 1.0).abs() < 1e-12);
        let zero = ScalarProblem::new("0", BoxDomain::interval(-2.0, 2.0).unwrap(), |_| 0.0);
        let r = tykhonov_diagnostic(&zero, &default_schedule(), 201, &th).unwrap();
        assert_eq!(r.verdict, WpVerdict::NotWellPosedEvidence);
        assert!(tykhonov_diagnostic(&zero, &[0.1, 0.5], 11, &th).is_err());
    }

    #[test]
    fn dh_examples() {
        let th = Thresholds::default();
        let quad = problem(-2.0, 2.0, |x| vec![x[0] * x[0], x[0] * x[0]]);
        let dirs = vec![vec![1.0, 1.0]];
        let r = dh_diagnostic(&quad, &[0.0], &dirs, &default_schedule(), 201, &th).unwrap();
        assert_eq!(r.verdict, WpVerdict::WellPosedEvidence);
        let s = dh_via_scalarization(&quad, &[0.0], &default_schedule(), 201, &th).unwrap();
        assert_eq!(s.verdict, WpVerdict::WellPosedEvidence);

        let lin = problem(-1.0, 1.0, |x| vec![x[0], -x[0]]);
        let r = dh_diagnostic(&lin, &[0.0], &dirs, &default_schedule(), 201, &th).unwrap();
        assert_eq!(r.verdict, WpVerdict::WellPosedEvidence);
        // α = 1/2: level set [-1/2, 1/2]
        assert!((r.curve(0)[1] - 1.0).abs() < 1e-12);

        let zero = problem(-1.0, 1.0, |_| vec![0.0, 0.0]);
        let r = dh_diagnostic(&zero, &[0.2], &default_directions(&zero), &default_schedule(), 51, &th).unwrap();
        assert_eq!(r.verdict, WpVerdict::NotWellPosedEvidence);
        let s = dh_via_scalarization(&zero, &[0.2], &default_schedule(), 51, &th).unwrap();
        assert_eq!(s.verdict, WpVerdict::NotWellPosedEvidence);

        assert!(dh_diagnostic(&quad, &[0.0], &[vec![1.0, 0.0]], &default_schedule(), 21, &th).is_err());
    }

    #[test]
    fn sufficient_linear() {
        let th = Thresholds::default();
        let p = problem(-2.0, 2.0, |x| vec![x[0] * x[0], x[0].powi(4)]);
        assert!(dh_sufficient_linear(&p, &[0.0], &[1.0, 0.0], &default_schedule(), 201, &th).unwrap());
        let zero = problem(-1.0, 1.0, |_| vec![0.0, 0.0]);
        assert!(!dh_sufficient_linear(&zero, &[0.0], &[1.0, 1.0], &default_schedule(), 51, &th).unwrap());
    }

    #[test]
    fn default_directions_are_interior() {
        let c = OrderingCone::new(vec![vec![1.0, 0.0], vec![1.0, 1.0]]).unwrap();
        let p = VectorProblem::new("w", BoxDomain::interval(-1.0, 1.0).unwrap(), c, |x| vec![x[0], x[0]]).unwrap();
        let dirs = default_directions(&p);
        assert_eq!(dirs.len(), 3);
        assert!(dirs.iter().all(|d| p.cone().contains(d, true).unwrap()));
    }
}

//! Vector optimization problems over a box, their perturbations and
//! scalarizations, cone-order level sets, and the metric of uniform
//! convergence on bounded sets.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cone::OrderingCone;
use crate::diameter;
use crate::distance::oriented_value;
use crate::error::{check_dim, Error, Result};
use crate::expr::Expr;
use crate::lattice::{BoxDomain, Lattice};
use crate::linalg::{dist, dot, norm, sub};

pub type VectorFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
pub type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// `min f(x)` over a box, ordered by a cone.
#[derive(Clone)]
pub struct VectorProblem {
    label: String,
    objective_dim: usize,
    evaluator: VectorFn,
    domain: BoxDomain,
    cone: Arc<OrderingCone>,
    continuous: bool,
    lsc: bool,
}

impl fmt::Debug for VectorProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VectorProblem")
            .field("label", &self.label)
            .field("decision_dim", &self.decision_dim())
            .field("objective_dim", &self.objective_dim)
            .field("domain", &self.domain)
            .field("cone", &self.cone)
            .finish_non_exhaustive()
    }
}

impl VectorProblem {
    /// The evaluator must be pure: the same input always yields the same output.
    pub fn new<F>(
        label: impl Into<String>,
        domain: BoxDomain,
        cone: OrderingCone,
        evaluator: F,
    ) -> Result<Self>
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        Self::from_arc(label, domain, Arc::new(cone), Arc::new(evaluator))
    }

    pub fn from_arc(
        label: impl Into<String>,
        domain: BoxDomain,
        cone: Arc<OrderingCone>,
        evaluator: VectorFn,
    ) -> Result<Self> {
        let probe = evaluator(&domain.center());
        check_dim(cone.ambient_dim(), probe.len())?;
        Ok(Self {
            label: label.into(),
            objective_dim: cone.ambient_dim(),
            evaluator,
            domain,
            cone,
            continuous: true,
            lsc: true,
        })
    }

    /// Objective given componentwise by parsed expressions.
    pub fn from_exprs(
        label: impl Into<String>,
        domain: BoxDomain,
        cone: OrderingCone,
        components: Vec<Expr>,
    ) -> Result<Self> {
        check_dim(cone.ambient_dim(), components.len())?;
        for c in &components {
            check_dim(domain.dim(), c.dim())?;
        }
        Self::new(label, domain, cone, move |x| {
            components.iter().map(|c| c.eval(x)).collect()
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn decision_dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn objective_dim(&self) -> usize {
        self.objective_dim
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn cone(&self) -> &OrderingCone {
        &self.cone
    }

    pub fn evaluator(&self) -> &VectorFn {
        &self.evaluator
    }

    /// Whether the objective is known to be continuous (assumption flag).
    pub fn is_continuous(&self) -> bool {
        self.continuous
    }

    /// Whether the objective is assumed cone-lower-semicontinuous. Not tested
    /// numerically; lattice evaluation cannot falsify it.
    pub fn is_lsc(&self) -> bool {
        self.lsc
    }

    pub fn with_flags(mut self, continuous: bool, lsc: bool) -> Self {
        self.continuous = continuous;
        self.lsc = lsc;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_cone(mut self, cone: OrderingCone) -> Result<Self> {
        check_dim(self.objective_dim, cone.ambient_dim())?;
        self.cone = Arc::new(cone);
        Ok(self)
    }

    pub fn with_domain(mut self, domain: BoxDomain) -> Result<Self> {
        check_dim(self.decision_dim(), domain.dim())?;
        self.domain = domain;
        Ok(self)
    }

    #[inline]
    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        (self.evaluator)(x)
    }
}

/// `a * |x - center|^alpha * direction`, added to an objective.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationTerm {
    pub center: Vec<f64>,
    pub coefficient: f64,
    pub exponent: f64,
    pub direction: Vec<f64>,
}

impl PerturbationTerm {
    pub fn new(center: Vec<f64>, coefficient: f64, exponent: f64, direction: Vec<f64>) -> Result<Self> {
        if !(coefficient > 0.0 && coefficient.is_finite()) {
            return Err(Error::InvalidInput("perturbation coefficient must be positive".into()));
        }
        if !(exponent >= 1.0 && exponent.is_finite()) {
            return Err(Error::InvalidInput("perturbation exponent must be at least 1".into()));
        }
        Ok(Self {
            center,
            coefficient,
            exponent,
            direction,
        })
    }

    pub fn value_at(&self, x: &[f64]) -> f64 {
        self.coefficient * dist(x, &self.center).powf(self.exponent)
    }
}

/// `f + a |x - center|^alpha k0` on the same domain and cone.
pub fn perturb(p: &VectorProblem, t: &PerturbationTerm) -> Result<VectorProblem> {
    check_dim(p.objective_dim(), t.direction.len())?;
    check_dim(p.decision_dim(), t.center.len())?;
    if !p.cone().contains(&t.direction, true)? {
        return Err(Error::InvalidInput(
            "perturbation direction must lie in the interior of the cone".into(),
        ));
    }
    let inner = p.evaluator.clone();
    let term = t.clone();
    let evaluator: VectorFn = Arc::new(move |x: &[f64]| {
        let mut y = inner(x);
        let s = term.value_at(x);
        for (yi, ki) in y.iter_mut().zip(&term.direction) {
            *yi += s * ki;
        }
        y
    });
    Ok(VectorProblem {
        label: format!("{}+perturbation", p.label),
        evaluator,
        ..p.clone()
    })
}

/// A scalar minimization problem over a box.
#[derive(Clone)]
pub struct ScalarProblem {
    label: String,
    evaluator: ScalarFn,
    domain: BoxDomain,
    anchor: Option<Vec<f64>>,
}

impl fmt::Debug for ScalarProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarProblem")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("anchor", &self.anchor)
            .finish_non_exhaustive()
    }
}

impl ScalarProblem {
    pub fn new<F>(label: impl Into<String>, domain: BoxDomain, evaluator: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self {
            label: label.into(),
            evaluator: Arc::new(evaluator),
            domain,
            anchor: None,
        }
    }

    /// Adds an off-lattice point that lattice scans evaluate alongside the grid.
    pub fn with_anchor(mut self, anchor: Vec<f64>) -> Self {
        self.anchor = Some(anchor);
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn anchor(&self) -> Option<&[f64]> {
        self.anchor.as_deref()
    }

    pub fn evaluator(&self) -> &ScalarFn {
        &self.evaluator
    }

    #[inline]
    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.evaluator)(x)
    }

    /// `sp + a |x - center|^alpha`
    pub fn perturbed(&self, center: Vec<f64>, coefficient: f64, exponent: f64) -> ScalarProblem {
        let inner = self.evaluator.clone();
        let evaluator: ScalarFn =
            Arc::new(move |x: &[f64]| inner(x) + coefficient * dist(x, &center).powf(exponent));
        ScalarProblem {
            label: format!("{}+perturbation", self.label),
            evaluator,
            domain: self.domain.clone(),
            anchor: self.anchor.clone(),
        }
    }
}

/// `x ↦ <xi, f(x)>` for `xi ∈ C* \ {0}`.
pub fn scalarize_linear(p: &VectorProblem, xi: &[f64]) -> Result<ScalarProblem> {
    check_dim(p.objective_dim(), xi.len())?;
    if norm(xi) == 0.0 {
        return Err(Error::InvalidInput("scalarizing functional must be nonzero".into()));
    }
    if !p.cone().dual_contains(xi)? {
        return Err(Error::InvalidInput(
            "scalarizing functional is not in the dual cone".into(),
        ));
    }
    let f = p.evaluator.clone();
    let xi = xi.to_vec();
    let label = format!("<{:?}, {}>", xi, p.label);
    let evaluator: ScalarFn = Arc::new(move |x: &[f64]| dot(&xi, &f(x)));
    Ok(ScalarProblem {
        label,
        evaluator,
        domain: p.domain.clone(),
        anchor: None,
    })
}

/// `x ↦ D_{-C}(f(x) - f(x̄))`. The point `x̄` becomes the scan anchor.
///
/// A projection failure (not expected for polyhedral cones) evaluates to NaN,
/// which lattice scans treat as `+inf`.
pub fn scalarize_oriented(p: &VectorProblem, xbar: &[f64]) -> Result<ScalarProblem> {
    check_dim(p.decision_dim(), xbar.len())?;
    if !p.domain().contains(xbar) {
        return Err(Error::InvalidInput("reference point outside the domain".into()));
    }
    let f = p.evaluator.clone();
    let cone = p.cone.clone();
    let fbar = f(xbar);
    let evaluator: ScalarFn = Arc::new(move |x: &[f64]| {
        let delta = sub(&f(x), &fbar);
        oriented_value(&cone, &delta).unwrap_or(f64::NAN)
    });
    Ok(ScalarProblem {
        label: format!("D(f - f(x̄)) for {}", p.label),
        evaluator,
        domain: p.domain.clone(),
        anchor: Some(xbar.to_vec()),
    })
}

/// A finite sample of decision points.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointSet {
    pub points: Vec<Vec<f64>>,
}

impl PointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn diameter(&self) -> f64 {
        diameter::diameter(&self.points)
    }
}

/// Lattice points of `L(y) = { x : f(x) ∈ y - C }`.
pub fn level_set(p: &VectorProblem, y: &[f64], grid_resolution: usize) -> Result<PointSet> {
    check_dim(p.objective_dim(), y.len())?;
    let lattice = Lattice::new(p.domain(), grid_resolution)?;
    let cone = p.cone();
    let hits = lattice.map(|x| {
        let fx = p.eval(x);
        let gap = sub(y, &fx);
        cone.contains_unchecked(&gap, false)
    });
    let points = hits
        .iter()
        .enumerate()
        .filter(|(_, &h)| h)
        .map(|(i, _)| lattice.point(i))
        .collect();
    Ok(PointSet { points })
}

/// Largest pairwise distance in `s` (0 when empty or a singleton).
pub fn diameter(s: &PointSet) -> f64 {
    s.diameter()
}

/// Parameters of the sampled metric `d(f, g) = Σ_i 2^-i t_i / (1 + t_i)` with
/// `t_i = sup { |f(x) - g(x)| : |x - anchor| <= i, x in the domain }`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricParams {
    pub anchor: Vec<f64>,
    pub truncation: usize,
    pub samples_per_ball: usize,
    pub seed: u64,
    pub overflow_cap: f64,
}

pub const DEFAULT_TRUNCATION: usize = 20;
pub const DEFAULT_SAMPLES_PER_BALL: usize = 4096;
pub const DEFAULT_OVERFLOW_CAP: f64 = 1e12;

impl MetricParams {
    pub fn new(anchor: Vec<f64>) -> Self {
        Self {
            anchor,
            truncation: DEFAULT_TRUNCATION,
            samples_per_ball: DEFAULT_SAMPLES_PER_BALL,
            seed: 0,
            overflow_cap: DEFAULT_OVERFLOW_CAP,
        }
    }

    /// Defaults with the anchor at the box center.
    pub fn for_domain(domain: &BoxDomain) -> Self {
        Self::new(domain.center())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_truncation(mut self, truncation: usize) -> Self {
        self.truncation = truncation;
        self
    }

    pub fn with_samples(mut self, samples_per_ball: usize) -> Self {
        self.samples_per_ball = samples_per_ball;
        self
    }

    /// Upper bound on the neglected series tail.
    pub fn tail_bound(&self) -> f64 {
        0.5f64.powi(self.truncation as i32)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionDistance {
    pub value: f64,
    pub tail_bound: f64,
    /// Estimated `t_i` for `i = 1..=truncation` (nondecreasing).
    pub ball_sups: Vec<f64>,
    /// Some `t_i` exceeded the overflow cap; `value` was set to 1.
    pub capped: bool,
}

/// Deterministic sample points for each ball `|x - anchor| <= i` intersected
/// with the box: the anchor, box corners and axis points pulled back to the
/// ball, random points on the boundary of the intersection, and uniform
/// points inside it.
pub fn ball_samples(domain: &BoxDomain, mp: &MetricParams) -> Result<Vec<Vec<Vec<f64>>>> {
    check_dim(domain.dim(), mp.anchor.len())?;
    if mp.truncation == 0 {
        return Err(Error::InvalidInput("metric truncation must be at least 1".into()));
    }
    if !domain.contains(&mp.anchor) {
        return Err(Error::InvalidInput("metric anchor must lie in the domain".into()));
    }
    let d = domain.dim();
    let theta = &mp.anchor;
    let corners: Vec<Vec<f64>> = if d <= 12 {
        (0..1usize << d)
            .map(|mask| {
                (0..d)
                    .map(|k| {
                        if mask >> k & 1 == 1 {
                            domain.upper()[k]
                        } else {
                            domain.lower()[k]
                        }
                    })
                    .collect()
            })
            .collect()
    } else {
        Vec::new()
    };

    let toward = |target: &[f64], radius: f64| -> Vec<f64> {
        let r = dist(target, theta);
        if r <= radius {
            target.to_vec()
        } else {
            let s = radius / r;
            theta.iter().zip(target).map(|(t, c)| t + s * (c - t)).collect()
        }
    };

    let mut balls = Vec::with_capacity(mp.truncation);
    for i in 1..=mp.truncation {
        let radius = i as f64;
        let mut rng = ChaCha8Rng::seed_from_u64(mp.seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let mut pts = vec![theta.clone()];
        pts.extend(corners.iter().map(|c| toward(c, radius)));
        for k in 0..d {
            for bound in [domain.lower()[k], domain.upper()[k]] {
                let mut target = theta.clone();
                target[k] = bound;
                pts.push(toward(&target, radius));
            }
        }
        let lo: Vec<f64> = (0..d).map(|k| domain.lower()[k].max(theta[k] - radius)).collect();
        let hi: Vec<f64> = (0..d).map(|k| domain.upper()[k].min(theta[k] + radius)).collect();
        let boundary = mp.samples_per_ball / 2;
        for _ in 0..boundary {
            // random direction, pushed to the boundary of ball ∩ box
            let u: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
            let nu = norm(&u);
            if nu < 1e-12 {
                continue;
            }
            let mut t = radius / nu;
            for k in 0..d {
                if u[k] > 0.0 {
                    t = t.min((domain.upper()[k] - theta[k]) / u[k]);
                } else if u[k] < 0.0 {
                    t = t.min((domain.lower()[k] - theta[k]) / u[k]);
                }
            }
            pts.push(theta.iter().zip(&u).map(|(a, b)| a + t * b).collect());
        }
        let mut accepted = 0;
        let mut attempts = 0;
        let inner = mp.samples_per_ball - boundary;
        while accepted < inner && attempts < 50 * inner.max(1) {
            attempts += 1;
            let x: Vec<f64> = (0..d).map(|k| rng.random_range(lo[k]..=hi[k])).collect();
            if dist(&x, theta) <= radius {
                pts.push(x);
                accepted += 1;
            }
        }
        balls.push(pts);
    }
    Ok(balls)
}

/// Sampled estimate of `d(f, g)`; both problems must share dimensions and domain.
pub fn function_distance(
    p: &VectorProblem,
    q: &VectorProblem,
    mp: &MetricParams,
) -> Result<FunctionDistance> {
    check_dim(p.decision_dim(), q.decision_dim())?;
    check_dim(p.objective_dim(), q.objective_dim())?;
    if p.domain() != q.domain() {
        return Err(Error::InvalidInput("problems must share the same domain".into()));
    }
    let f = p.evaluator().clone();
    let g = q.evaluator().clone();
    distance_between(p.domain(), move |x| dist(&f(x), &g(x)), mp)
}

/// Same metric for an arbitrary pointwise gap `x ↦ |f(x) - g(x)|`.
pub fn distance_between<F>(domain: &BoxDomain, gap: F, mp: &MetricParams) -> Result<FunctionDistance>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let balls = ball_samples(domain, mp)?;
    let mut ball_sups = Vec::with_capacity(balls.len());
    let mut running = 0.0f64;
    let mut capped = false;
    for pts in &balls {
        let sup = pts
            .par_iter()
            .map(|x| {
                let v = gap(x);
                if v.is_nan() {
                    f64::INFINITY
                } else {
                    v
                }
            })
            .reduce(|| 0.0, f64::max);
        running = running.max(sup);
        if !(running <= mp.overflow_cap) {
            capped = true;
        }
        ball_sups.push(running);
    }
    let value = if capped {
        1.0
    } else {
        ball_sups
            .iter()
            .enumerate()
            .map(|(k, t)| 0.5f64.powi(k as i32 + 1) * t / (1.0 + t))
            .sum()
    };
    Ok(FunctionDistance {
        value,
        tail_bound: mp.tail_bound(),
        ball_sups,
        capped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orthant_problem<F>(label: &str, a: f64, b: f64, f: F) -> VectorProblem
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        VectorProblem::new(label, BoxDomain::interval(a, b).unwrap(), OrderingCone::orthant(2), f).unwrap()
    }

    #[test]
    fn perturbation_of_zero() {
        let zero = VectorProblem::new(
            "zero",
            BoxDomain::cube(2, 5.0).unwrap(),
            OrderingCone::orthant(2),
            |_| vec![0.0, 0.0],
        )
        .unwrap();
        let t = PerturbationTerm::new(vec![0.0, 0.0], 1.0, 1.0, vec![1.0, 1.0]).unwrap();
        let p = perturb(&zero, &t).unwrap();
        assert_eq!(p.eval(&[3.0, 4.0]), vec![5.0, 5.0]);
        let t = PerturbationTerm::new(vec![1.0, -2.0], 0.5, 2.0, vec![1.0, 1.0]).unwrap();
        assert_eq!(perturb(&zero, &t).unwrap().eval(&[1.0, -2.0]), vec![0.0, 0.0]);
    }

    #[test]
    fn perturbation_rejects_boundary_direction() {
        let p = orthant_problem("x", -1.0, 1.0, |x| vec![x[0], x[0]]);
        let t = PerturbationTerm::new(vec![0.0], 1.0, 1.0, vec![1.0, 0.0]).unwrap();
        assert!(perturb(&p, &t).is_err());
        assert!(PerturbationTerm::new(vec![0.0], 0.0, 1.0, vec![1.0, 1.0]).is_err());
        assert!(PerturbationTerm::new(vec![0.0], 1.0, 0.5, vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn linear_scalarization() {
        let p = orthant_problem("x-x2", -2.0, 2.0, |x| vec![x[0], x[0] * x[0]]);
        let h = scalarize_linear(&p, &[0.0, 1.0]).unwrap();
        assert_eq!(h.eval(&[1.5]), 2.25);
        let p = orthant_problem("xex", -2.0, 2.0, |x| vec![x[0], -x[0] * x[0].exp()]);
        let h = scalarize_linear(&p, &[1.0, 1.0]).unwrap();
        let x = 0.7f64;
        assert_eq!(h.eval(&[x]), x + -x * x.exp());
        assert!(scalarize_linear(&p, &[1.0, -1.0]).is_err());
        assert!(scalarize_linear(&p, &[0.0, 0.0]).is_err());
    }

    #[test]
    fn oriented_scalarization() {
        let p = orthant_problem("quad", -2.0, 2.0, |x| vec![x[0] * x[0], x[0] * x[0]]);
        let s = scalarize_oriented(&p, &[0.0]).unwrap();
        assert_eq!(s.eval(&[0.0]), 0.0);
        for x in [-1.5, -0.3, 0.8, 2.0] {
            let expected = x * x * 2f64.sqrt();
            assert!((s.eval(&[x]) - expected).abs() < 1e-12);
        }
        assert!(scalarize_oriented(&p, &[3.0]).is_err());
    }

    #[test]
    fn level_set_of_square() {
        let p = VectorProblem::new(
            "sq",
            BoxDomain::interval(-2.0, 2.0).unwrap(),
            OrderingCone::orthant(1),
            |x| vec![x[0] * x[0]],
        )
        .unwrap();
        let s = level_set(&p, &[1.0], 41).unwrap();
        assert_eq!(s.len(), 21);
        assert!(s.points.iter().all(|x| x[0].abs() <= 1.0 + 1e-12));
        assert!((s.diameter() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn level_set_of_zero_is_everything() {
        let p = orthant_problem("zero", -1.0, 1.0, |_| vec![0.0, 0.0]);
        assert_eq!(level_set(&p, &[0.0, 0.0], 11).unwrap().len(), 11);
    }

    #[test]
    fn metric_identity_and_constant_shift() {
        let p = orthant_problem("a", -1.0, 1.0, |x| vec![x[0], x[0] * x[0]]);
        let q = orthant_problem("b", -1.0, 1.0, |x| vec![x[0] + 3.0, x[0] * x[0] + 4.0]);
        let mp = MetricParams::for_domain(p.domain());
        assert_eq!(function_distance(&p, &p, &mp).unwrap().value, 0.0);
        let d = function_distance(&p, &q, &mp).unwrap();
        let expected = 5.0 / 6.0 * (1.0 - mp.tail_bound());
        assert!((d.value - expected).abs() < 1e-12);
    }

    #[test]
    fn metric_overflow_maps_to_one() {
        let p = orthant_problem("a", -1.0, 1.0, |_| vec![0.0, 0.0]);
        let q = orthant_problem("b", -1.0, 1.0, |_| vec![1e13, 0.0]);
        let d = function_distance(&p, &q, &MetricParams::for_domain(p.domain())).unwrap();
        assert!(d.capped);
        assert_eq!(d.value, 1.0);
    }

    #[test]
    fn metric_radial_closed_form() {
        // ||f - g||_i = i |k0| / j while the ball stays inside the box
        let domain = BoxDomain::cube(2, 30.0).unwrap();
        let k0 = [1.0, 2.0];
        let j = 3.0;
        let f = VectorProblem::new("f", domain.clone(), OrderingCone::orthant(2), |x| vec![x[0], x[1]]).unwrap();
        let g = perturb(&f, &PerturbationTerm::new(vec![0.0, 0.0], 1.0 / j, 1.0, k0.to_vec()).unwrap()).unwrap();
        let mp = MetricParams::for_domain(&domain);
        let d = function_distance(&f, &g, &mp).unwrap();
        let expected: f64 = (1..=mp.truncation)
            .map(|i| {
                let t = i as f64 * norm(&k0) / j;
                0.5f64.powi(i as i32) * t / (1.0 + t)
            })
            .sum();
        assert!((d.value - expected).abs() < 1e-12);
    }
}

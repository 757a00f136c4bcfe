//! Built-in example problems and the checks that reproduce their known facts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{
    expanding_minima, is_c_bounded_below, is_star_quasiconvex,
    quasiconvexity_violation, sample_dual_base, BoundedBelowOptions, Verdict, Witness,
};
use crate::cone::OrderingCone;
use crate::diagnostics::{
    classify_point, default_directions, default_schedule, dh_diagnostic, dh_via_scalarization,
    geometric_schedule, tykhonov_diagnostic, weff_via_distance, Thresholds, TriState, WpVerdict,
};
use crate::error::{Error, Result};
use crate::lattice::{BoxDomain, Lattice};
use crate::linalg::{norm, sub};
use crate::perturb::{density_pipeline, tikhonov_regularize, CheckOptions, PipelineOptions};
use crate::problem::{MetricParams, ScalarProblem, VectorProblem};

/// Where an expected fact comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// A published mathematical statement about the example.
    Published,
    /// A closed-form computation specific to the example.
    ClosedForm,
    /// Follows directly from the definitions.
    Definition,
}

impl Basis {
    pub fn as_str(self) -> &'static str {
        match self {
            Basis::Published => "published",
            Basis::ClosedForm => "closed_form",
            Basis::Definition => "definition",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RegistryEntry {
    pub label: String,
    pub description: String,
    pub problem: VectorProblem,
    pub grid_resolution: usize,
    /// Efficient point used by default in point-wise checks.
    pub reference_point: Vec<f64>,
    /// Whether some functional of the dual cone bounds the objective from below.
    pub c_bounded: bool,
}

pub const HILBERT_PREFIX: &str = "hilbert-truncation-";

/// Labels of the fixed entries; `hilbert-truncation-<d>` accepts `d` in 1..=8.
pub const LABELS: &[&str] = &[
    "x-minus-xex",
    "zero-function",
    "x-minus-x",
    "quad-pair",
    "x-x2",
    "x2-x4",
    "shifted-quads-2d",
    "wedge-cone-quad",
    "abs-pair",
    "three-obj",
    "exp-pair",
    "flat-bottom",
    "hilbert-truncation-2",
    "hilbert-truncation-4",
    "hilbert-truncation-8",
];

fn interval(a: f64, b: f64) -> BoxDomain {
    BoxDomain::interval(a, b).expect("valid interval")
}

fn entry<F>(
    label: &str,
    description: &str,
    domain: BoxDomain,
    cone: OrderingCone,
    grid_resolution: usize,
    reference_point: Vec<f64>,
    c_bounded: bool,
    f: F,
) -> RegistryEntry
where
    F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
{
    RegistryEntry {
        label: label.to_string(),
        description: description.to_string(),
        problem: VectorProblem::new(label, domain, cone, f).expect("registry entries are consistent"),
        grid_resolution,
        reference_point,
        c_bounded,
    }
}

/// Resolution per axis for the Hilbert truncations, keeping lattices below ~2·10^7 points.
pub fn hilbert_resolution(d: usize) -> usize {
    match d {
        1 | 2 => 201,
        3 | 4 => 65,
        5 | 6 => 17,
        _ => 9,
    }
}

pub fn lookup(label: &str) -> Result<RegistryEntry> {
    let r2 = || OrderingCone::orthant(2);
    let e = match label {
        "x-minus-xex" => entry(
            label,
            "f(x) = (x, -x e^x) on [-10, 10]: efficient set [0, inf), no bounding functional",
            interval(-10.0, 10.0),
            r2(),
            401,
            vec![1.0],
            false,
            |x| vec![x[0], -x[0] * x[0].exp()],
        ),
        "zero-function" => entry(
            label,
            "f = 0 on [-1, 1]: every point efficient, none DH well-posed",
            interval(-1.0, 1.0),
            r2(),
            201,
            vec![0.0],
            true,
            |_| vec![0.0, 0.0],
        ),
        "x-minus-x" => entry(
            label,
            "f(x) = (x, -x) on [-1, 1]",
            interval(-1.0, 1.0),
            r2(),
            201,
            vec![0.0],
            true,
            |x| vec![x[0], -x[0]],
        ),
        "quad-pair" => entry(
            label,
            "f(x) = (x^2, x^2) on [-2, 2]",
            interval(-2.0, 2.0),
            r2(),
            201,
            vec![0.0],
            true,
            |x| vec![x[0] * x[0], x[0] * x[0]],
        ),
        "x-x2" => entry(
            label,
            "f(x) = (x, x^2) on [-3, 3]",
            interval(-3.0, 3.0),
            r2(),
            201,
            vec![0.0],
            true,
            |x| vec![x[0], x[0] * x[0]],
        ),
        "x2-x4" => entry(
            label,
            "f(x) = (x^2, x^4) on [-2, 2]",
            interval(-2.0, 2.0),
            r2(),
            201,
            vec![0.0],
            true,
            |x| vec![x[0] * x[0], x[0].powi(4)],
        ),
        "shifted-quads-2d" => entry(
            label,
            "f(x) = (|x - a|^2, |x - b|^2), a = (-0.5, 0), b = (0.5, 0.5), on [-1, 1]^2",
            BoxDomain::cube(2, 1.0).expect("valid box"),
            r2(),
            201,
            vec![0.0, 0.25],
            true,
            |x| {
                let a = (x[0] + 0.5).powi(2) + x[1] * x[1];
                let b = (x[0] - 0.5).powi(2) + (x[1] - 0.5).powi(2);
                vec![a, b]
            },
        ),
        "wedge-cone-quad" => entry(
            label,
            "f(x) = (x^2, (x - 1)^2) on [-1, 2], cone generated by (1, 0) and (1, 1)",
            interval(-1.0, 2.0),
            OrderingCone::new(vec![vec![1.0, 0.0], vec![1.0, 1.0]]).expect("valid cone"),
            201,
            vec![0.5],
            true,
            |x| vec![x[0] * x[0], (x[0] - 1.0).powi(2)],
        ),
        "abs-pair" => entry(
            label,
            "f(x) = (|x|, |x - 1|) on [-1, 2]",
            interval(-1.0, 2.0),
            r2(),
            201,
            vec![0.5],
            true,
            |x| vec![x[0].abs(), (x[0] - 1.0).abs()],
        ),
        "three-obj" => entry(
            label,
            "f(x) = (x1^2, x2^2, (x1 + x2 - 1)^2) on [-1, 1]^2, cone R^3_+",
            BoxDomain::cube(2, 1.0).expect("valid box"),
            OrderingCone::orthant(3),
            201,
            vec![0.0, 0.0],
            true,
            |x| vec![x[0] * x[0], x[1] * x[1], (x[0] + x[1] - 1.0).powi(2)],
        ),
        "exp-pair" => entry(
            label,
            "f(x) = (e^x, e^-x) on [-3, 3]",
            interval(-3.0, 3.0),
            r2(),
            201,
            vec![0.0],
            true,
            |x| vec![x[0].exp(), (-x[0]).exp()],
        ),
        "flat-bottom" => entry(
            label,
            "f(x) = (p(x), p(x)) with p(x) = max(|x| - 1, 0)^2 on [-2, 2]",
            interval(-2.0, 2.0),
            r2(),
            201,
            vec![0.0],
            true,
            |x| {
                let p = (x[0].abs() - 1.0).max(0.0).powi(2);
                vec![p, p]
            },
        ),
        other => {
            let d = other
                .strip_prefix(HILBERT_PREFIX)
                .and_then(|s| s.parse::<usize>().ok())
                .filter(|d| (1..=8).contains(d))
                .ok_or_else(|| Error::UnknownLabel(other.to_string()))?;
            entry(
                other,
                "f(x) = sum_i x_i^2 / i^2 on [-1, 1]^d",
                BoxDomain::cube(d, 1.0).expect("valid box"),
                OrderingCone::orthant(1),
                hilbert_resolution(d),
                vec![0.0; d],
                true,
                |x| {
                    vec![x
                        .iter()
                        .enumerate()
                        .map(|(i, v)| v * v / ((i + 1) * (i + 1)) as f64)
                        .sum()]
                },
            )
        }
    };
    Ok(e)
}

/// Scalar form of the Hilbert truncation.
pub fn hilbert_scalar(d: usize) -> ScalarProblem {
    ScalarProblem::new(
        format!("{HILBERT_PREFIX}{d}"),
        BoxDomain::cube(d, 1.0).expect("valid box"),
        |x| {
            x.iter()
                .enumerate()
                .map(|(i, v)| v * v / ((i + 1) * (i + 1)) as f64)
                .sum()
        },
    )
}

/// Level offsets for the Hilbert check: 0.01, then halving from 2^-7.
pub fn hilbert_schedule() -> Vec<f64> {
    let mut s = vec![0.01];
    s.extend(geometric_schedule(30).into_iter().skip(7));
    s
}

/// `count` problems `(xᵀQ₁x + b₁ᵀx, xᵀQ₂x + b₂ᵀx)` on `[-2, 2]^dim` with
/// `Q_i = L Lᵀ + 0.1 I` and entries of `L`, `b_i` uniform in `[-1, 1]`.
pub fn random_convex_quadratic_pairs(count: usize, dim: usize, seed: u64) -> Vec<VectorProblem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let mut mats = Vec::new();
            let mut lins = Vec::new();
            for _ in 0..2 {
                let l: Vec<Vec<f64>> = (0..dim)
                    .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
                    .collect();
                let q: Vec<Vec<f64>> = (0..dim)
                    .map(|i| {
                        (0..dim)
                            .map(|j| {
                                let s: f64 = (0..dim).map(|t| l[i][t] * l[j][t]).sum();
                                s + if i == j { 0.1 } else { 0.0 }
                            })
                            .collect()
                    })
                    .collect();
                mats.push(q);
                lins.push((0..dim).map(|_| rng.random_range(-1.0..1.0)).collect::<Vec<f64>>());
            }
            VectorProblem::new(
                format!("convex-quadratic-{k}"),
                BoxDomain::cube(dim, 2.0).expect("valid box"),
                OrderingCone::orthant(2),
                move |x| {
                    (0..2)
                        .map(|c| {
                            let quad: f64 = (0..dim)
                                .map(|i| x[i] * (0..dim).map(|j| mats[c][i][j] * x[j]).sum::<f64>())
                                .sum();
                            quad + (0..dim).map(|i| lins[c][i] * x[i]).sum::<f64>()
                        })
                        .collect()
                },
            )
            .expect("consistent dimensions")
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssertionOutcome {
    pub name: String,
    pub basis: Basis,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationReport {
    pub label: String,
    pub outcomes: Vec<AssertionOutcome>,
}

impl ReplicationReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }
}

fn outcome(name: &str, basis: Basis, passed: bool, detail: String) -> AssertionOutcome {
    AssertionOutcome {
        name: name.to_string(),
        basis,
        passed,
        detail,
    }
}

/// Runs the checks attached to a registry entry.
pub fn replicate(label: &str) -> Result<ReplicationReport> {
    let e = lookup(label)?;
    let outcomes = match label {
        "x-minus-xex" => replicate_xex(&e)?,
        "zero-function" => replicate_zero(&e)?,
        l if l.starts_with(HILBERT_PREFIX) => replicate_hilbert(&e)?,
        _ => replicate_generic(&e)?,
    };
    Ok(ReplicationReport {
        label: label.to_string(),
        outcomes,
    })
}

fn replicate_xex(e: &RegistryEntry) -> Result<Vec<AssertionOutcome>> {
    let p = &e.problem;
    let res = e.grid_resolution;
    let mut out = Vec::new();

    let eff_points = [0.0, 0.5, 1.0, 2.0, 5.0, 9.5];
    let eff_ok = eff_points
        .iter()
        .map(|&x| classify_point(p, &[x], res, 1e-9).map(|v| v.efficient == TriState::Yes))
        .collect::<Result<Vec<_>>>()?;
    out.push(outcome(
        "efficient on [0, T]",
        Basis::Published,
        eff_ok.iter().all(|b| *b),
        format!("points={eff_points:?} efficient={eff_ok:?}"),
    ));

    let neg_points = [-9.5, -5.0, -2.0, -1.0, -0.5, -0.05];
    let mut neg_ok = true;
    for &x in &neg_points {
        let v = classify_point(p, &[x], res, 1e-9)?;
        let witnessed = v.dominating_witness.as_ref().is_some_and(|w| {
            let d = sub(&p.eval(w), &p.eval(&[x]));
            d.iter().all(|c| *c <= 0.0) && norm(&d) > 0.0 && w[0] < x
        });
        neg_ok &= v.efficient == TriState::No && witnessed;
    }
    out.push(outcome(
        "not efficient on [-T, 0), witness x < x̄ re-checked",
        Basis::Published,
        neg_ok,
        format!("points={neg_points:?}"),
    ));

    let opts = BoundedBelowOptions::default().with_resolution(res);
    let mut xis = sample_dual_base(p, 12, 7)?;
    xis.push(p.cone().base_polytope()?.barycenter());
    let mut diverge = true;
    for xi in &xis {
        let v = is_c_bounded_below(p, xi, &opts)?;
        let rechecked = match &v.witness {
            Some(Witness::Divergence { minima, .. }) => {
                let (again, _) = expanding_minima(p, xi, &opts)?;
                &again == minima
            }
            _ => false,
        };
        diverge &= v.verdict == Verdict::CounterexampleFound && rechecked;
    }
    out.push(outcome(
        "inf <xi, f> diverges for every tested base functional",
        Basis::Published,
        diverge,
        format!("functionals={}", xis.len()),
    ));

    let q = is_star_quasiconvex(p, 8, 256, 11)?;
    let q_ok = match &q.witness {
        Some(Witness::Triple { x, z, t, xi: Some(xi), .. }) => {
            quasiconvexity_violation(p, xi, x, z, *t) > 0.0
        }
        _ => false,
    };
    out.push(outcome(
        "not *-quasiconvex, witness re-checked",
        Basis::Published,
        q.verdict == Verdict::CounterexampleFound && q_ok,
        format!("samples={}", q.samples_used),
    ));

    let refusal = density_pipeline(p, 0.1, &MetricParams::for_domain(p.domain()), &PipelineOptions::new(res));
    out.push(outcome(
        "density pipeline refuses: no bounding functional",
        Basis::Published,
        matches!(refusal, Err(Error::NoBoundingFunctional)),
        match &refusal {
            Ok(_) => "pipeline returned a certificate".into(),
            Err(err) => err.kind().to_string(),
        },
    ));
    Ok(out)
}

fn replicate_zero(e: &RegistryEntry) -> Result<Vec<AssertionOutcome>> {
    let p = &e.problem;
    let res = e.grid_resolution;
    let th = Thresholds::default();
    let lattice = Lattice::new(p.domain(), 11)?;
    let points: Vec<Vec<f64>> = (0..lattice.len()).map(|i| lattice.point(i)).collect();
    let mut out = Vec::new();

    let all_eff = points
        .iter()
        .map(|x| classify_point(p, x, res, 1e-9).map(|v| v.efficient == TriState::Yes))
        .collect::<Result<Vec<_>>>()?;
    out.push(outcome(
        "every point efficient",
        Basis::Definition,
        all_eff.iter().all(|b| *b),
        format!("points={}", points.len()),
    ));

    let dirs = default_directions(p);
    let mut none_wp = true;
    for x in &points {
        let r = dh_diagnostic(p, x, &dirs, &default_schedule(), res, &th)?;
        none_wp &= r.verdict == WpVerdict::NotWellPosedEvidence;
    }
    out.push(outcome(
        "no point DH well-posed",
        Basis::Definition,
        none_wp,
        format!("points={} directions={}", points.len(), dirs.len()),
    ));

    let opts = CheckOptions::new(res);
    let mut fixed = true;
    for x in [vec![-1.0], vec![0.0], vec![0.6]] {
        let (_, cert) = tikhonov_regularize(p, &x, 1, &opts, None)?;
        fixed &= cert.valid;
    }
    out.push(outcome(
        "Tikhonov perturbation makes x̄ efficient and DH well-posed",
        Basis::Published,
        fixed,
        "n=1 at x̄ in {-1, 0, 0.6}".into(),
    ));
    Ok(out)
}

fn replicate_hilbert(e: &RegistryEntry) -> Result<Vec<AssertionOutcome>> {
    let d = e.problem.decision_dim();
    let sp = hilbert_scalar(d);
    let r = tykhonov_diagnostic(&sp, &hilbert_schedule(), e.grid_resolution, &Thresholds::default())?;
    let measured = r.curve(0)[0];
    let expected = 2.0 * d as f64 * 0.01f64.sqrt();
    let spacing = r.grid_spacing;
    Ok(vec![
        outcome(
            "Tykhonov well-posed in dimension d",
            Basis::Published,
            r.verdict == WpVerdict::WellPosedEvidence,
            format!("verdict={}", r.verdict.as_str()),
        ),
        outcome(
            "diam L(0.01) = 2 d sqrt(0.01) within 2 lattice steps",
            Basis::ClosedForm,
            (measured - expected).abs() <= 2.0 * spacing,
            format!("measured={measured} expected={expected} spacing={spacing}"),
        ),
    ])
}

fn replicate_generic(e: &RegistryEntry) -> Result<Vec<AssertionOutcome>> {
    let p = &e.problem;
    let x = &e.reference_point;
    let res = e.grid_resolution;
    let th = Thresholds::default();
    let v = classify_point(p, x, res, 1e-9)?;
    let w = weff_via_distance(p, x, res, 1e-9)?;
    let dh = dh_diagnostic(p, x, &default_directions(p), &default_schedule(), res, &th)?;
    let sc = dh_via_scalarization(p, x, &default_schedule(), res, &th)?;
    Ok(vec![
        outcome(
            "reference point efficient",
            Basis::ClosedForm,
            v.efficient == TriState::Yes,
            format!("efficient={}", v.efficient.as_str()),
        ),
        outcome(
            "weak efficiency: definition and oriented distance agree",
            Basis::Published,
            (v.weakly_efficient == TriState::Yes) == w,
            format!("definition={} distance={w}", v.weakly_efficient.as_str()),
        ),
        outcome(
            "DH test and scalarized Tykhonov test agree",
            Basis::Published,
            dh.verdict == sc.verdict,
            format!("dh={} scalarized={}", dh.verdict.as_str(), sc.verdict.as_str()),
        ),
    ])
}

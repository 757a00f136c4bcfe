//! Constructive regularization: norm perturbations that make an efficient
//! point DH well-posed, the discrete Ekeland principle, the density pipeline
//! for problems bounded below along a dual functional, and a probe that runs
//! the pipeline over a family of convex problems.

use rayon::prelude::*;

use crate::analysis::{find_bounding_functional, is_c_convex, BoundedBelowOptions, Verdict};
use crate::diagnostics::{
    classify_point, default_directions, default_schedule, dh_diagnostic, tykhonov_diagnostic,
    Thresholds, TriState, WellPosednessReport, WpVerdict,
};
use crate::error::{check_dim, Error, Result};
use crate::lattice::Lattice;
use crate::linalg::{dist, dot, norm, scale};
use crate::problem::{
    function_distance, perturb, scalarize_linear, FunctionDistance, MetricParams, PerturbationTerm,
    ScalarProblem, VectorProblem,
};

/// Lattice and tolerance settings shared by the regularization routines.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOptions {
    pub grid_resolution: usize,
    /// Image-space tolerance for efficiency checks.
    pub tol: f64,
    pub thresholds: Thresholds,
    pub schedule: Vec<f64>,
}

impl CheckOptions {
    pub fn new(grid_resolution: usize) -> Self {
        Self {
            grid_resolution,
            tol: 1e-9,
            thresholds: Thresholds::default(),
            schedule: default_schedule(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularizationCertificate {
    pub n: u64,
    pub efficient: TriState,
    pub dh_report: WellPosednessReport,
    pub distance: FunctionDistance,
    /// Present only for problems flagged continuous.
    pub strictly_efficient: Option<TriState>,
    pub valid: bool,
}

/// `f_n = f + (1/n) |x - x̄| k0` together with the checks that `x̄` stays
/// efficient, becomes DH well-posed, and (for continuous `f`) is not shown to
/// fail strict efficiency. The metric anchor defaults to `x̄` when `mp` is `None`.
pub fn tikhonov_regularize(
    p: &VectorProblem,
    xbar: &[f64],
    n: u64,
    opts: &CheckOptions,
    mp: Option<&MetricParams>,
) -> Result<(VectorProblem, RegularizationCertificate)> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    let before = classify_point(p, xbar, opts.grid_resolution, opts.tol)?;
    if before.efficient != TriState::Yes {
        return Err(Error::Precondition(format!(
            "point {xbar:?} is not efficient on the lattice"
        )));
    }
    let term = PerturbationTerm::new(xbar.to_vec(), 1.0 / n as f64, 1.0, p.cone().k0().to_vec())?;
    let fn_ = perturb(p, &term)?.with_label(format!("{}+tikhonov(n={n})", p.label()));
    let default_mp = MetricParams::new(xbar.to_vec());
    let mp = mp.unwrap_or(&default_mp);

    let ((after, dh_report), distance) = rayon::join(
        || {
            rayon::join(
                || classify_point(&fn_, xbar, opts.grid_resolution, opts.tol),
                || {
                    dh_diagnostic(
                        &fn_,
                        xbar,
                        &default_directions(&fn_),
                        &opts.schedule,
                        opts.grid_resolution,
                        &opts.thresholds,
                    )
                },
            )
        },
        || function_distance(p, &fn_, mp),
    );
    let after = after?;
    let dh_report = dh_report?;
    let distance = distance?;
    let strictly_efficient = p.is_continuous().then_some(after.strictly_efficient);
    let valid = after.efficient == TriState::Yes
        && dh_report.verdict == WpVerdict::WellPosedEvidence
        && strictly_efficient != Some(TriState::No);
    Ok((
        fn_,
        RegularizationCertificate {
            n,
            efficient: after.efficient,
            dh_report,
            distance,
            strictly_efficient,
            valid,
        },
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EkelandResult {
    pub center: Vec<f64>,
    pub strength: f64,
    pub radius: f64,
    pub start: Vec<f64>,
    pub value_at_center: f64,
    pub value_at_start: f64,
    /// Infimum over the candidate set (lattice plus start point).
    pub infimum: f64,
    /// `min { sp(x) + ε|x - x̂| - sp(x̂) : x ≠ x̂ }` over the candidates.
    pub margin: f64,
    pub iterations: usize,
    pub candidates: usize,
    pub grid_spacing: f64,
    /// `|x̂ - x̄₀| < r`
    pub within_radius: bool,
    /// `sp(x̂) <= sp(x̄₀) - ε|x̄₀ - x̂|`
    pub decrease_holds: bool,
    /// `x̂ = x̄₀`, where the decrease inequality holds with equality.
    pub decrease_is_equality: bool,
    /// `x̂` is the unique minimizer of `sp + ε|· - x̂|` (margin > 0).
    pub strict_minimizer: bool,
}

impl EkelandResult {
    pub fn holds(&self) -> bool {
        self.within_radius && self.decrease_holds && self.strict_minimizer
    }
}

/// Discrete Ekeland principle on the lattice plus `x0`.
///
/// Starting at `x0`, each step moves to the lowest-index minimizer of `sp`
/// over `S(x_k) = { x : sp(x) + ε|x - x_k| <= sp(x_k) }` and stops when that
/// minimizer is `x_k` itself. Every move strictly lowers `sp`, so the loop ends
/// on the finite candidate set, and at the end no other candidate lies in
/// `S(x̂)`, which is exactly the strict-minimizer certificate.
pub fn ekeland_point(
    sp: &ScalarProblem,
    x0: &[f64],
    eps: f64,
    r: f64,
    grid_resolution: usize,
) -> Result<EkelandResult> {
    check_dim(sp.dim(), x0.len())?;
    if !(eps > 0.0 && eps.is_finite() && r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidInput("ε and r must be positive".into()));
    }
    let lattice = Lattice::new(sp.domain(), grid_resolution)?;
    let n = lattice.len();
    let point = |i: usize| if i == n { x0.to_vec() } else { lattice.point(i) };
    let clean = |v: f64| if v.is_nan() { f64::INFINITY } else { v };
    let mut values = lattice.map(|x| clean(sp.eval(x)));
    values.push(clean(sp.eval(x0)));
    let infimum = values.iter().copied().fold(f64::INFINITY, f64::min);
    let start_value = values[n];
    if !infimum.is_finite() {
        return Err(Error::HypothesisNotMet("objective is not bounded below on the lattice".into()));
    }
    if !(start_value < infimum + r * eps) {
        return Err(Error::HypothesisNotMet(format!(
            "sp(x0) = {start_value} is not below inf + rε = {}",
            infimum + r * eps
        )));
    }

    // Candidate index n is x0; ties on sp break to the lowest index, with x0 last.
    let mut current = n;
    let mut current_point = x0.to_vec();
    let mut iterations = 0;
    loop {
        let cv = values[current];
        let cp = &current_point;
        let next = (0..=n)
            .into_par_iter()
            .map_init(
                || vec![0.0; sp.dim()],
                |buf, i| {
                    if i == n {
                        buf.copy_from_slice(x0);
                    } else {
                        lattice.fill_point(i, buf);
                    }
                    let inside = i == current || values[i] + eps * dist(buf, cp) <= cv;
                    (i, if inside { values[i] } else { f64::INFINITY })
                },
            )
            .reduce(|| (usize::MAX, f64::INFINITY), crate::lattice::better)
            .0;
        if next == current || values[next] >= cv {
            break;
        }
        current = next;
        current_point = point(next);
        iterations += 1;
        if iterations > n + 1 {
            return Err(Error::NumericalFailure("Ekeland iteration did not settle".into()));
        }
    }

    let center = current_point;
    let cv = values[current];
    let margin = (0..=n)
        .into_par_iter()
        .filter(|&i| i != current)
        .map_init(
            || vec![0.0; sp.dim()],
            |buf, i| {
                if i == n {
                    buf.copy_from_slice(x0);
                } else {
                    lattice.fill_point(i, buf);
                }
                // a copy of x̂ at distance 0 is the same decision point
                let d = dist(buf, &center);
                if d == 0.0 {
                    f64::INFINITY
                } else {
                    values[i] + eps * d - cv
                }
            },
        )
        .reduce(|| f64::INFINITY, f64::min);
    let moved = dist(&center, x0);
    let slack = 1e-12 * (1.0 + start_value.abs());
    Ok(EkelandResult {
        within_radius: moved < r,
        decrease_holds: cv <= start_value - eps * moved + slack,
        decrease_is_equality: moved == 0.0,
        strict_minimizer: margin > 0.0,
        center,
        strength: eps,
        radius: r,
        start: x0.to_vec(),
        value_at_center: cv,
        value_at_start: start_value,
        infimum,
        margin,
        iterations,
        candidates: n + 1,
        grid_spacing: lattice.spacing(),
    })
}

/// Settings for the density pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOptions {
    pub check: CheckOptions,
    pub bounded: BoundedBelowOptions,
    /// Random base points tried after the vertices and the barycenter.
    pub candidates: usize,
    pub seed: u64,
    /// Doubling search on `j` stops with an error above this value.
    pub j_cap: u64,
}

impl PipelineOptions {
    pub fn new(grid_resolution: usize) -> Self {
        Self {
            check: CheckOptions::new(grid_resolution),
            bounded: BoundedBelowOptions::default().with_resolution(grid_resolution),
            candidates: 16,
            seed: 0,
            j_cap: 1 << 30,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineCertificate {
    pub sigma: f64,
    pub bounding_functional: Vec<f64>,
    /// `k0` rescaled so that `<ξ̄, k0> = 1`.
    pub k0: Vec<f64>,
    pub theta: Vec<f64>,
    pub j: u64,
    /// Radius about θ of the lattice sublevel set `{ g_ξ̄ <= inf + 1 }`.
    pub m_radius: f64,
    /// `Σ_{k=0}^{K} 2^-k (k + M) |k0|`, K the metric truncation.
    pub s: f64,
    /// Bound on the neglected tail of the series for `s`.
    pub s_tail: f64,
    pub epsilon: f64,
    pub ekeland: EkelandResult,
    pub xhat: Vec<f64>,
    pub d_f_g: f64,
    pub d_g_h: f64,
    pub d_f_h: f64,
    pub tail_bound: f64,
    pub efficient: TriState,
    /// Smallest α tested by the DH check, sized so that the level sets of the
    /// ε-perturbation fall within half a lattice step.
    pub alpha_min: f64,
    pub dh_report: WellPosednessReport,
}

/// Schedule halving past the default until `alpha_min`.
fn extended_schedule(base: &[f64], alpha_min: f64) -> Vec<f64> {
    let mut s = base.to_vec();
    let mut last = *s.last().unwrap_or(&1.0);
    while last > alpha_min && s.len() < 200 {
        last *= 0.5;
        s.push(last);
    }
    s
}

/// Radius about `theta` of the lattice points with `value <= inf + 1`, and the
/// lowest-index lattice minimizer.
fn sublevel_radius(sp: &ScalarProblem, lattice: &Lattice, theta: &[f64]) -> Result<(f64, Vec<f64>, f64)> {
    let (idx, inf) = lattice.argmin(|x| sp.eval(x));
    if !inf.is_finite() {
        return Err(Error::NumericalFailure("scalarized objective not finite".into()));
    }
    let below = lattice.collect_below(|x| sp.eval(x), inf + 1.0);
    let radius = below
        .iter()
        .map(|(i, _)| dist(&lattice.point(*i), theta))
        .fold(0.0, f64::max);
    Ok((radius, lattice.point(idx), inf))
}

/// Builds `h` with `d(f, h) < σ` that is DH well-posed at an efficient point.
///
/// Steps: bounding functional ξ̄; `k0` rescaled to `<ξ̄, k0> = 1`; smallest
/// power of two `j` with `d(f, g) < σ/2` for `g = f + (1/j)|x - θ| k0`; the
/// sublevel radius `M`; `s` and `ε = σ/(2s)`; Ekeland point `x̂` of `<ξ̄, g>`
/// from its lattice minimizer with `r = max(2M, spacing)`;
/// `h = g + ε|x - x̂| k0`; verification.
pub fn density_pipeline(
    p: &VectorProblem,
    sigma: f64,
    mp: &MetricParams,
    opts: &PipelineOptions,
) -> Result<(VectorProblem, PipelineCertificate)> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidInput("σ must be positive".into()));
    }
    check_dim(p.decision_dim(), mp.anchor.len())?;
    let res = opts.check.grid_resolution;

    let xi = find_bounding_functional(p, opts.candidates, opts.seed, &opts.bounded)?
        .ok_or(Error::NoBoundingFunctional)?;

    let k0 = scale(p.cone().k0(), 1.0 / dot(&xi, p.cone().k0()));
    let cone = p.cone().with_k0(k0.clone())?;
    let p = p.clone().with_cone(cone)?;
    let theta = mp.anchor.clone();

    let mut j: u64 = 1;
    let (g, d_f_g) = loop {
        let term = PerturbationTerm::new(theta.clone(), 1.0 / j as f64, 1.0, k0.clone())?;
        let g = perturb(&p, &term)?;
        let d = function_distance(&p, &g, mp)?;
        if d.value < sigma / 2.0 {
            break (g, d.value);
        }
        if j >= opts.j_cap {
            return Err(Error::SearchCapReached(format!(
                "no j <= {} brings d(f, g) below σ/2",
                opts.j_cap
            )));
        }
        j *= 2;
    };

    let g_xi = scalarize_linear(&g, &xi)?;
    let lattice = Lattice::new(p.domain(), res)?;
    let (m_radius, x0, _) = sublevel_radius(&g_xi, &lattice, &theta)?;

    let k0_norm = norm(&k0);
    let big_k = mp.truncation as i32;
    let s: f64 = (0..=big_k)
        .map(|k| 0.5f64.powi(k) * (k as f64 + m_radius) * k0_norm)
        .sum();
    let s_tail = 0.5f64.powi(big_k) * (big_k as f64 + 2.0 + m_radius) * k0_norm;
    let epsilon = sigma / (2.0 * s);

    let r = (2.0 * m_radius).max(lattice.spacing());
    let ekeland = ekeland_point(&g_xi, &x0, epsilon, r, res)?;
    if !ekeland.holds() {
        return Err(Error::CertificateFailure {
            clause: "ekeland conclusions".into(),
        });
    }
    let xhat = ekeland.center.clone();

    let h_term = PerturbationTerm::new(xhat.clone(), epsilon, 1.0, k0.clone())?;
    let h = perturb(&g, &h_term)?.with_label(format!("{}+density(σ={sigma})", p.label()));

    let directions = default_directions(&h);
    let max_c = directions
        .iter()
        .map(|c| dot(&xi, c))
        .fold(0.0f64, f64::max);
    let alpha_min = epsilon * lattice.spacing() / (2.0 * max_c.max(f64::MIN_POSITIVE));
    let schedule = extended_schedule(&opts.check.schedule, alpha_min);

    let ((classified, dh_report), (d_g_h, d_f_h)) = rayon::join(
        || {
            rayon::join(
                || classify_point(&h, &xhat, res, opts.check.tol),
                || dh_diagnostic(&h, &xhat, &directions, &schedule, res, &opts.check.thresholds),
            )
        },
        || rayon::join(|| function_distance(&g, &h, mp), || function_distance(&p, &h, mp)),
    );
    let classified = classified?;
    let dh_report = dh_report?;
    let d_g_h = d_g_h?.value;
    let d_f_h = d_f_h?.value;
    let tail_bound = mp.tail_bound();

    let fail = |clause: &str| Err(Error::CertificateFailure { clause: clause.into() });
    if classified.efficient != TriState::Yes {
        return fail("x̂ efficient for h");
    }
    if dh_report.verdict != WpVerdict::WellPosedEvidence {
        return fail("h DH well-posed at x̂");
    }
    if !(d_f_h < sigma) {
        return fail("d(f, h) < σ");
    }
    if !(d_f_g < sigma / 2.0 && d_g_h <= sigma / 2.0 + tail_bound) {
        return fail("metric budget");
    }
    if dist(&xhat, &theta) > m_radius + lattice.spacing() {
        return fail("|x̂ - θ| <= M");
    }

    Ok((
        h,
        PipelineCertificate {
            sigma,
            bounding_functional: xi,
            k0,
            theta,
            j,
            m_radius,
            s,
            s_tail,
            epsilon,
            ekeland,
            xhat,
            d_f_g,
            d_g_h,
            d_f_h,
            tail_bound,
            efficient: classified.efficient,
            alpha_min,
            dh_report,
        },
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProbeStatus {
    Skipped(String),
    Failed(Error),
    Certified {
        certificate: Box<PipelineCertificate>,
        /// Largest `n <= n_max` with `diam L(a) < 1/n` for some tested level
        /// of `<ξ̄, h>`; 0 when none.
        largest_n: u64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeMember {
    pub label: String,
    pub status: ProbeStatus,
    pub success: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub members: Vec<ProbeMember>,
    pub n_max: u64,
    /// Successes over members that were not skipped; `None` when there are none.
    pub success_fraction: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeOptions {
    pub pipeline: PipelineOptions,
    pub convexity_trials: usize,
    /// Membership in the sets `A_n` is tested for `n = 1..=n_max`.
    pub n_max: u64,
}

impl ProbeOptions {
    pub fn new(grid_resolution: usize) -> Self {
        Self {
            pipeline: PipelineOptions::new(grid_resolution),
            convexity_trials: 256,
            n_max: 10,
        }
    }
}

/// Runs the density pipeline over a family of cone-convex problems and tests
/// each output scalarization for membership in `A_n`.
pub fn genericity_probe(
    family: &[VectorProblem],
    sigma: f64,
    mp: &MetricParams,
    opts: &ProbeOptions,
) -> Result<ProbeReport> {
    let members: Vec<ProbeMember> = family
        .par_iter()
        .enumerate()
        .map(|(k, p)| {
            let label = p.label().to_string();
            let seed = opts.pipeline.seed.wrapping_add(k as u64);
            match is_c_convex(p, opts.convexity_trials, seed) {
                Ok(v) if v.verdict == Verdict::EvidenceHolds => {}
                Ok(_) => {
                    return ProbeMember {
                        label,
                        status: ProbeStatus::Skipped("not C-convex".into()),
                        success: false,
                    }
                }
                Err(e) => {
                    return ProbeMember {
                        label,
                        status: ProbeStatus::Failed(e),
                        success: false,
                    }
                }
            }
            let outcome = density_pipeline(p, sigma, mp, &opts.pipeline).and_then(|(h, cert)| {
                let sh = scalarize_linear(&h, &cert.bounding_functional)?;
                let report = tykhonov_diagnostic(
                    &sh,
                    &opts.pipeline.check.schedule,
                    opts.pipeline.check.grid_resolution,
                    &opts.pipeline.check.thresholds,
                )?;
                let smallest = report.curve(0).into_iter().fold(f64::INFINITY, f64::min);
                let largest_n = (1..=opts.n_max)
                    .rev()
                    .find(|&n| smallest < 1.0 / n as f64)
                    .unwrap_or(0);
                Ok((cert, largest_n))
            });
            match outcome {
                Ok((cert, largest_n)) => ProbeMember {
                    label,
                    success: largest_n == opts.n_max,
                    status: ProbeStatus::Certified {
                        certificate: Box::new(cert),
                        largest_n,
                    },
                },
                Err(e) => ProbeMember {
                    label,
                    status: ProbeStatus::Failed(e),
                    success: false,
                },
            }
        })
        .collect();
    let evaluated = members
        .iter()
        .filter(|m| !matches!(m.status, ProbeStatus::Skipped(_)))
        .count();
    let successes = members.iter().filter(|m| m.success).count();
    Ok(ProbeReport {
        members,
        n_max: opts.n_max,
        success_fraction: (evaluated > 0).then(|| successes as f64 / evaluated as f64),
    })
}

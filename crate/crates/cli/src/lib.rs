//! Experiment runner: resolves a problem from the built-in registry or a TOML
//! file, dispatches one subcommand and renders a deterministic report.
//!
//! Exit status is 0 when the run produced no error, no failed assertion and no
//! invalid certificate; 1 when a check failed; 2 on errors.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use wellposed::analysis::{
    find_bounding_functional, is_c_bounded_below, is_c_convex, is_star_quasiconvex,
    BoundedBelowOptions,
};
use wellposed::config::ProblemConfig;
use wellposed::diagnostics::{
    classify_point, default_directions, dh_diagnostic, dh_via_scalarization,
    geometric_schedule, tykhonov_diagnostic, weff_via_distance, Thresholds,
    WellPosednessReport, DEFAULT_SCHEDULE_DEPTH,
};
use wellposed::distance::oriented_distance_sampled;
use wellposed::perturb::{
    density_pipeline, genericity_probe, tikhonov_regularize, CheckOptions, PipelineOptions,
    ProbeOptions, ProbeStatus,
};
use wellposed::registry::{self, random_convex_quadratic_pairs};
use wellposed::report::{self, Record};
use wellposed::{oriented_distance, scalarize_linear, Error, MetricParams, Result, VectorProblem};

pub const TOOL: &str = "wellposed";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Subcommand {
    Distance,
    Analyze,
    Classify,
    TykhonovCheck,
    DhCheck,
    Perturb,
    Pipeline,
    Probe,
    Replicate,
}

impl Subcommand {
    pub fn as_str(self) -> &'static str {
        match self {
            Subcommand::Distance => "distance",
            Subcommand::Analyze => "analyze",
            Subcommand::Classify => "classify",
            Subcommand::TykhonovCheck => "tykhonov-check",
            Subcommand::DhCheck => "dh-check",
            Subcommand::Perturb => "perturb",
            Subcommand::Pipeline => "pipeline",
            Subcommand::Probe => "probe",
            Subcommand::Replicate => "replicate",
        }
    }

    /// Subcommands whose result includes a diameter curve.
    pub fn has_table(self) -> bool {
        matches!(
            self,
            Subcommand::TykhonovCheck | Subcommand::DhCheck | Subcommand::Perturb | Subcommand::Pipeline
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    RecordText,
    TableCsv,
}

impl OutputFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            OutputFormat::RecordText => "record-text",
            OutputFormat::TableCsv => "table-csv",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSource {
    Registry(String),
    ConfigFile(PathBuf),
}

impl fmt::Display for ProblemSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemSource::Registry(l) => write!(f, "registry:{l}"),
            ProblemSource::ConfigFile(p) => write!(f, "config:{}", p.display()),
        }
    }
}

/// Everything a run depends on; equal configurations give byte-identical reports.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    pub source: ProblemSource,
    /// Points per axis; `None` takes the registry entry's value or a
    /// dimension-based default for config files.
    pub grid: Option<usize>,
    pub tol: f64,
    pub schedule_depth: u32,
    pub thresholds: Thresholds,
    pub sigma: f64,
    pub n: u64,
    pub seed: u64,
    /// Decision point; defaults to the registry reference point or the box center.
    pub point: Option<Vec<f64>>,
    /// Dual functional; defaults to the barycenter of the dual base.
    pub xi: Option<Vec<f64>>,
    /// Image-space vector for `distance`.
    pub y: Option<Vec<f64>>,
    pub trials: usize,
    /// Extra random convex quadratic pairs in the probe family.
    pub family_size: usize,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl RunConfig {
    pub fn new(subcommand: Subcommand, source: ProblemSource) -> Self {
        Self {
            subcommand,
            source,
            grid: None,
            tol: 1e-9,
            schedule_depth: DEFAULT_SCHEDULE_DEPTH,
            thresholds: Thresholds::default(),
            sigma: 0.1,
            n: 1,
            seed: 0,
            point: None,
            xi: None,
            y: None,
            trials: 256,
            family_size: 4,
            out: None,
            format: OutputFormat::RecordText,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub report: String,
}

fn parse_vector(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}")))
        .collect()
}

/// A comma-separated vector argument, such as `--point 0.5,-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CommaVec(pub Vec<f64>);

impl std::str::FromStr for CommaVec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        parse_vector(s).map(CommaVec)
    }
}

#[derive(Debug, Parser)]
#[command(name = "wellposed", version, about = "Well-posedness diagnostics for vector optimization problems")]
pub struct Cli {
    #[arg(value_enum)]
    pub subcommand: Subcommand,
    /// Registry label.
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    pub problem: Option<String>,
    /// Problem file in TOML.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, default_value_t = 0.1)]
    pub sigma: f64,
    #[arg(long, default_value_t = 1)]
    pub n: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Levels 2^0 .. 2^-depth.
    #[arg(long, default_value_t = DEFAULT_SCHEDULE_DEPTH)]
    pub schedule_depth: u32,
    /// Comma-separated decision point.
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<CommaVec>,
    /// Comma-separated dual functional.
    #[arg(long, allow_hyphen_values = true)]
    pub xi: Option<CommaVec>,
    /// Comma-separated image vector for `distance`.
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<CommaVec>,
    #[arg(long, default_value_t = 256)]
    pub trials: usize,
    #[arg(long, default_value_t = 4)]
    pub family_size: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::RecordText)]
    pub format: OutputFormat,
}

impl Cli {
    pub fn into_config(self) -> RunConfig {
        let source = match (self.problem, self.config) {
            (Some(l), _) => ProblemSource::Registry(l),
            (None, Some(p)) => ProblemSource::ConfigFile(p),
            (None, None) => unreachable!("clap requires one source"),
        };
        RunConfig {
            grid: self.grid,
            tol: self.tol,
            schedule_depth: self.schedule_depth,
            sigma: self.sigma,
            n: self.n,
            seed: self.seed,
            point: self.point.map(|v| v.0),
            xi: self.xi.map(|v| v.0),
            y: self.y.map(|v| v.0),
            trials: self.trials,
            family_size: self.family_size,
            out: self.out,
            format: self.format,
            ..RunConfig::new(self.subcommand, source)
        }
    }
}

struct Resolved {
    problem: VectorProblem,
    grid: usize,
    point: Vec<f64>,
    echo: String,
}

fn default_grid(dim: usize) -> usize {
    match dim {
        1 | 2 => 201,
        3 => 41,
        _ => 17,
    }
}

fn resolve(cfg: &RunConfig) -> Result<Resolved> {
    let (problem, grid, point, echo) = match &cfg.source {
        ProblemSource::Registry(label) => {
            let e = registry::lookup(label)?;
            let echo = format!("label={}; {}", e.label, e.description);
            (e.problem, e.grid_resolution, e.reference_point, echo)
        }
        ProblemSource::ConfigFile(path) => {
            let c = ProblemConfig::load(path)?;
            let p = c.build()?;
            let g = default_grid(p.decision_dim());
            let center = p.domain().center();
            (p, g, center, c.to_toml_string())
        }
    };
    Ok(Resolved {
        grid: cfg.grid.unwrap_or(grid),
        point: cfg.point.clone().unwrap_or(point),
        problem,
        echo,
    })
}

fn header(cfg: &RunConfig, r: Option<&Resolved>) -> Record {
    let mut h = Record::new("header")
        .field("tool", TOOL)
        .field("version", VERSION)
        .field("subcommand", cfg.subcommand.as_str())
        .field("source", &cfg.source)
        .field("format", cfg.format.as_str())
        .field("seed", cfg.seed)
        .field("tol", cfg.tol)
        .field("schedule_depth", cfg.schedule_depth)
        .field("tol_abs", cfg.thresholds.tol_abs)
        .field("decay_ratio", cfg.thresholds.decay_ratio)
        .field("sigma", cfg.sigma)
        .field("n", cfg.n)
        .field("trials", cfg.trials)
        .field("family_size", cfg.family_size);
    if let Some(r) = r {
        h = h
            .field("grid_resolution", r.grid)
            .vec_field("point", &r.point)
            .field("config", &r.echo);
    }
    h
}

fn dual_barycenter(p: &VectorProblem) -> Result<Vec<f64>> {
    Ok(p.cone().base_polytope()?.barycenter())
}

/// Records, optional curve table, and whether every certificate and assertion held.
struct Body {
    records: Vec<Record>,
    table: Option<WellPosednessReport>,
    ok: bool,
}

fn body(cfg: &RunConfig, r: &Resolved) -> Result<Body> {
    let p = &r.problem;
    let th = &cfg.thresholds;
    let schedule = geometric_schedule(cfg.schedule_depth);
    let mut records = Vec::new();
    let mut table = None;
    let mut ok = true;
    match cfg.subcommand {
        Subcommand::Distance => {
            let y = cfg
                .y
                .as_ref()
                .ok_or_else(|| Error::InvalidInput("distance needs --y".into()))?;
            let res = oriented_distance(p.cone(), y)?;
            let samples = p.cone().sample_dual_sphere(10_000, cfg.seed);
            let lower = oriented_distance_sampled(p.cone(), y, &samples)?;
            records.push(report::distance_record(y, &res).field("sampled_lower_bound", lower));
        }
        Subcommand::Analyze => {
            records.push(report::structural_record(&is_c_convex(p, cfg.trials, cfg.seed)?));
            records.push(report::structural_record(&is_star_quasiconvex(
                p, 16, cfg.trials, cfg.seed,
            )?));
            let bounded = BoundedBelowOptions::default();
            let xi = match &cfg.xi {
                Some(x) => x.clone(),
                None => dual_barycenter(p)?,
            };
            records.push(report::structural_record(&is_c_bounded_below(p, &xi, &bounded)?));
            let found = find_bounding_functional(p, 16, cfg.seed, &bounded)?;
            records.push(report::bounding_functional_record(found.as_deref()));
        }
        Subcommand::Classify => {
            let v = classify_point(p, &r.point, r.grid, cfg.tol)?;
            let via_distance = weff_via_distance(p, &r.point, r.grid, cfg.tol)?;
            let agree = match v.weakly_efficient.as_bool() {
                Some(b) => (b == via_distance).to_string(),
                None => "not_applicable".into(),
            };
            records.push(report::efficiency_record(&v));
            records.push(
                Record::new("weak_efficiency_routes")
                    .field("via_distance", via_distance)
                    .field("agree", agree),
            );
        }
        Subcommand::TykhonovCheck => {
            let xi = match &cfg.xi {
                Some(x) => x.clone(),
                None => dual_barycenter(p)?,
            };
            let sp = scalarize_linear(p, &xi)?.with_anchor(r.point.clone());
            let rep = tykhonov_diagnostic(&sp, &schedule, r.grid, th)?;
            records.push(report::wellposedness_record(&rep).vec_field("xi", &xi));
            table = Some(rep);
        }
        Subcommand::DhCheck => {
            let dirs = default_directions(p);
            let direct = dh_diagnostic(p, &r.point, &dirs, &schedule, r.grid, th)?;
            let scalar = dh_via_scalarization(p, &r.point, &schedule, r.grid, th)?;
            records.push(report::wellposedness_record(&direct));
            records.push(report::wellposedness_record(&scalar));
            records.push(
                Record::new("dh_routes")
                    .field("direct", direct.verdict.as_str())
                    .field("scalarized", scalar.verdict.as_str())
                    .field("agree", direct.verdict == scalar.verdict),
            );
            table = Some(direct);
        }
        Subcommand::Perturb => {
            let opts = CheckOptions {
                tol: cfg.tol,
                thresholds: *th,
                schedule,
                ..CheckOptions::new(r.grid)
            };
            let mp = MetricParams::new(r.point.clone()).with_seed(cfg.seed);
            let (_, cert) = tikhonov_regularize(p, &r.point, cfg.n, &opts, Some(&mp))?;
            ok = cert.valid;
            records.push(report::regularization_record(&cert));
            table = Some(cert.dh_report);
        }
        Subcommand::Pipeline => {
            let mut opts = PipelineOptions::new(r.grid);
            opts.seed = cfg.seed;
            opts.check.tol = cfg.tol;
            opts.check.thresholds = *th;
            opts.check.schedule = schedule;
            let mp = MetricParams::for_domain(p.domain()).with_seed(cfg.seed);
            let (_, cert) = density_pipeline(p, cfg.sigma, &mp, &opts)?;
            records.push(report::pipeline_record(&cert));
            table = Some(cert.dh_report);
        }
        Subcommand::Probe => {
            let mut family = vec![p.clone()];
            family.extend(random_convex_quadratic_pairs(
                cfg.family_size,
                p.decision_dim(),
                cfg.seed,
            ));
            let mut opts = ProbeOptions::new(r.grid);
            opts.pipeline.seed = cfg.seed;
            opts.pipeline.check.tol = cfg.tol;
            opts.pipeline.check.thresholds = *th;
            opts.pipeline.check.schedule = schedule;
            opts.convexity_trials = cfg.trials;
            let mp = MetricParams::for_domain(p.domain()).with_seed(cfg.seed);
            let rep = genericity_probe(&family, cfg.sigma, &mp, &opts)?;
            ok = !rep.members.iter().any(|m| {
                matches!(&m.status, ProbeStatus::Failed(Error::CertificateFailure { .. }))
            });
            records.extend(report::probe_records(&rep));
        }
        Subcommand::Replicate => {
            let label = match &cfg.source {
                ProblemSource::Registry(l) => l,
                ProblemSource::ConfigFile(_) => {
                    return Err(Error::InvalidInput("replicate needs a registry label".into()))
                }
            };
            let rep = registry::replicate(label)?;
            ok = rep.all_passed();
            records.extend(report::replication_records(&rep));
        }
    }
    Ok(Body { records, table, ok })
}

fn csv_with_header(h: &Record, table: &WellPosednessReport) -> String {
    let mut s: String = h.render().lines().map(|l| format!("# {l}\n")).collect();
    s.push_str(&report::diam_csv(table));
    s
}

/// Runs one configuration without touching the filesystem beyond reading a
/// config file.
pub fn run(cfg: &RunConfig) -> RunOutcome {
    if cfg.format == OutputFormat::TableCsv && !cfg.subcommand.has_table() {
        let e = Error::InvalidInput(format!(
            "{} has no diameter table; use record-text",
            cfg.subcommand.as_str()
        ));
        return RunOutcome {
            exit_code: EXIT_ERROR,
            report: report::render(&[header(cfg, None), report::error_record(&e)]),
        };
    }
    let resolved = match resolve(cfg) {
        Ok(r) => r,
        Err(e) => {
            return RunOutcome {
                exit_code: EXIT_ERROR,
                report: report::render(&[header(cfg, None), report::error_record(&e)]),
            }
        }
    };
    let h = header(cfg, Some(&resolved));
    match body(cfg, &resolved) {
        Err(e) => RunOutcome {
            exit_code: EXIT_ERROR,
            report: report::render(&[h, report::error_record(&e)]),
        },
        Ok(b) => {
            let exit_code = if b.ok { EXIT_OK } else { EXIT_CHECK_FAILED };
            let report = match (cfg.format, &b.table) {
                (OutputFormat::TableCsv, Some(t)) => csv_with_header(&h, t),
                _ => {
                    let mut all = vec![h];
                    all.extend(b.records);
                    let status = if b.ok { "ok" } else { "check_failed" };
                    all.push(Record::new("status").field("result", status).field("exit_code", exit_code));
                    report::render(&all)
                }
            };
            RunOutcome { exit_code, report }
        }
    }
}

/// [`run`] followed by writing the report to `cfg.out` when set.
pub fn execute(cfg: &RunConfig) -> std::io::Result<RunOutcome> {
    let outcome = run(cfg);
    if let Some(path) = &cfg.out {
        write_report(path, &outcome.report)?;
    }
    Ok(outcome)
}

fn write_report(path: &Path, text: &str) -> std::io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vectors_parse() {
        assert_eq!(parse_vector("1,-2.5, 3").unwrap(), vec![1.0, -2.5, 3.0]);
        assert!(parse_vector("1,a").is_err());
    }

    #[test]
    fn csv_refused_without_table() {
        let mut cfg = RunConfig::new(Subcommand::Analyze, ProblemSource::Registry("quad-pair".into()));
        cfg.format = OutputFormat::TableCsv;
        let out = run(&cfg);
        assert_eq!(out.exit_code, EXIT_ERROR);
        assert!(out.report.contains("kind=invalid_input"));
    }

    #[test]
    fn unknown_label_is_an_error() {
        let cfg = RunConfig::new(Subcommand::Classify, ProblemSource::Registry("nope".into()));
        let out = run(&cfg);
        assert_eq!(out.exit_code, EXIT_ERROR);
        assert!(out.report.contains("kind=unknown_label"));
    }
}

//! Report rendering: line-oriented `key=value` records separated by blank
//! lines, and flat CSV tables of diameter curves.
//!
//! Floats use Rust's shortest round-trip formatting, so equal inputs render to
//! identical bytes.

use std::fmt::Write;

use crate::analysis::{SionResult, StructuralVerdict, Witness};
use crate::diagnostics::{EfficiencyVerdict, WellPosednessReport};
use crate::distance::OrientedDistanceResult;
use crate::error::Error;
use crate::perturb::{
    EkelandResult, PipelineCertificate, ProbeReport, ProbeStatus, RegularizationCertificate,
};
use crate::problem::FunctionDistance;
use crate::registry::ReplicationReport;

/// One block of `key=value` lines headed by `record=<kind>`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Record {
    pub kind: String,
    pub fields: Vec<(String, String)>,
}

/// `-0` prints as `0`.
pub fn vector(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| (x + 0.0).to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn opt_vector(v: Option<&[f64]>) -> String {
    v.map_or_else(|| "none".to_string(), vector)
}

impl Record {
    pub fn new(kind: impl Into<String>) -> Self {
        Self {
            kind: kind.into(),
            fields: Vec::new(),
        }
    }

    /// Values are flattened to one line.
    pub fn field(mut self, key: &str, value: impl ToString) -> Self {
        let v = value.to_string().replace('\n', "\\n");
        self.fields.push((key.to_string(), v));
        self
    }

    pub fn vec_field(self, key: &str, v: &[f64]) -> Self {
        self.field(key, vector(v))
    }

    pub fn render(&self) -> String {
        let mut s = format!("record={}\n", self.kind);
        for (k, v) in &self.fields {
            let _ = writeln!(s, "{k}={v}");
        }
        s
    }
}

pub fn render(records: &[Record]) -> String {
    records
        .iter()
        .map(Record::render)
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn error_record(e: &Error) -> Record {
    Record::new("error").field("kind", e.kind()).field("message", e)
}

pub fn distance_record(y: &[f64], r: &OrientedDistanceResult) -> Record {
    Record::new("oriented_distance")
        .vec_field("y", y)
        .field("value", r.value)
        .vec_field("nearest_point", &r.nearest_point)
        .field(
            "active_facet",
            r.active_facet.map_or("none".to_string(), |f| f.to_string()),
        )
}

pub fn structural_record(v: &StructuralVerdict) -> Record {
    let mut r = Record::new("structural_verdict")
        .field("property", v.property.as_str())
        .field("verdict", v.verdict.as_str())
        .field("samples_used", v.samples_used)
        .field("routes_agree", v.routes_agree);
    match &v.witness {
        None => r = r.field("witness", "none"),
        Some(Witness::Triple { x, z, t, xi, violation }) => {
            r = r
                .field("witness", "triple")
                .vec_field("witness_x", x)
                .vec_field("witness_z", z)
                .field("witness_t", t)
                .field("witness_xi", opt_vector(xi.as_deref()))
                .field("witness_violation", violation);
        }
        Some(Witness::Divergence { xi, factors, minima, .. }) => {
            r = r
                .field("witness", "divergence")
                .vec_field("witness_xi", xi)
                .vec_field("witness_factors", factors)
                .vec_field("witness_minima", minima);
        }
    }
    r
}

pub fn bounding_functional_record(xi: Option<&[f64]>) -> Record {
    Record::new("bounding_functional").field("xi", opt_vector(xi))
}

pub fn sion_record(r: &SionResult) -> Record {
    Record::new("sion")
        .field("sup_inf", r.sup_inf)
        .field("inf_sup", r.inf_sup)
        .field("lattice_error", r.lattice_error)
        .field("lp_value", r.lp_value)
}

pub fn efficiency_record(v: &EfficiencyVerdict) -> Record {
    let deltas: Vec<String> = v
        .steff_deltas
        .iter()
        .map(|(e, d)| format!("{e}:{}", d.map_or("none".to_string(), |d| d.to_string())))
        .collect();
    Record::new("efficiency")
        .vec_field("point", &v.point)
        .field("efficient", v.efficient.as_str())
        .field("weakly_efficient", v.weakly_efficient.as_str())
        .field("strictly_efficient", v.strictly_efficient.as_str())
        .field("dominating_witness", opt_vector(v.dominating_witness.as_deref()))
        .field("strict_witness", opt_vector(v.strict_witness.as_deref()))
        .field("steff_eps_delta", deltas.join(";"))
        .field("grid_resolution", v.grid_resolution)
        .field("grid_spacing", v.grid_spacing)
        .field("tol", v.tol)
}

pub fn wellposedness_record(r: &WellPosednessReport) -> Record {
    let dirs: Vec<String> = r.directions.iter().map(|d| vector(d)).collect();
    let per_dir: Vec<&str> = r.direction_verdicts.iter().map(|v| v.as_str()).collect();
    let schedule_tail = r.schedule.last().copied().unwrap_or(0.0);
    let mut rec = Record::new("wellposedness")
        .field("kind", r.kind.as_str())
        .field("point", opt_vector(r.point.as_deref()))
        .field("schedule_len", r.schedule.len())
        .field("schedule_first", r.schedule.first().copied().unwrap_or(0.0))
        .field("schedule_last", schedule_tail)
        .field("directions", if dirs.is_empty() { "none".into() } else { dirs.join(";") })
        .field("direction_verdicts", per_dir.join(","))
        .field("verdict", r.verdict.as_str())
        .field("tol_abs", r.thresholds.tol_abs)
        .field("decay_ratio", r.thresholds.decay_ratio)
        .field("grid_resolution", r.grid_resolution)
        .field("grid_spacing", r.grid_spacing);
    if let Some(inf) = r.infimum {
        rec = rec.field("infimum", inf);
    }
    if let Some(a) = &r.argmin {
        rec = rec.vec_field("argmin", a);
    }
    for (k, d) in r.direction_verdicts.iter().enumerate() {
        let curve = r.curve(k);
        rec = rec.field(
            &format!("final_diameter_{k}"),
            format!("{} ({})", curve.last().copied().unwrap_or(0.0), d.as_str()),
        );
    }
    rec
}

/// `level,direction_index,diameter` rows in report order.
pub fn diam_csv(r: &WellPosednessReport) -> String {
    let mut s = String::from("level,direction_index,diameter\n");
    for e in &r.diam_curve {
        let _ = writeln!(s, "{},{},{}", e.level, e.direction_index, e.diameter);
    }
    s
}

pub fn metric_record(name: &str, d: &FunctionDistance) -> Record {
    Record::new("function_distance")
        .field("name", name)
        .field("value", d.value)
        .field("tail_bound", d.tail_bound)
        .field("capped", d.capped)
        .vec_field("ball_sups", &d.ball_sups)
}

pub fn regularization_record(c: &RegularizationCertificate) -> Record {
    Record::new("tikhonov_regularization")
        .field("n", c.n)
        .field("efficient", c.efficient.as_str())
        .field("dh_verdict", c.dh_report.verdict.as_str())
        .field("distance", c.distance.value)
        .field("distance_tail_bound", c.distance.tail_bound)
        .field(
            "strictly_efficient",
            c.strictly_efficient.map_or("not_checked", |s| s.as_str()),
        )
        .field("valid", c.valid)
}

pub fn ekeland_record(e: &EkelandResult) -> Record {
    Record::new("ekeland")
        .vec_field("start", &e.start)
        .vec_field("center", &e.center)
        .field("strength", e.strength)
        .field("radius", e.radius)
        .field("value_at_start", e.value_at_start)
        .field("value_at_center", e.value_at_center)
        .field("infimum", e.infimum)
        .field("margin", e.margin)
        .field("iterations", e.iterations)
        .field("candidates", e.candidates)
        .field("within_radius", e.within_radius)
        .field("decrease_holds", e.decrease_holds)
        .field("decrease_is_equality", e.decrease_is_equality)
        .field("strict_minimizer", e.strict_minimizer)
}

pub fn pipeline_record(c: &PipelineCertificate) -> Record {
    Record::new("pipeline_certificate")
        .field("sigma", c.sigma)
        .vec_field("bounding_functional", &c.bounding_functional)
        .vec_field("k0", &c.k0)
        .vec_field("theta", &c.theta)
        .field("j", c.j)
        .field("M", c.m_radius)
        .field("s", c.s)
        .field("s_tail", c.s_tail)
        .field("epsilon", c.epsilon)
        .vec_field("xhat", &c.xhat)
        .field("d_f_g", c.d_f_g)
        .field("d_g_h", c.d_g_h)
        .field("d_f_h", c.d_f_h)
        .field("tail_bound", c.tail_bound)
        .field("efficient", c.efficient.as_str())
        .field("alpha_min", c.alpha_min)
        .field("dh_verdict", c.dh_report.verdict.as_str())
}

pub fn probe_records(r: &ProbeReport) -> Vec<Record> {
    let mut out = vec![Record::new("probe")
        .field("members", r.members.len())
        .field("n_max", r.n_max)
        .field(
            "success_fraction",
            r.success_fraction.map_or("not_applicable".to_string(), |f| f.to_string()),
        )];
    for m in &r.members {
        let rec = Record::new("probe_member").field("label", &m.label).field("success", m.success);
        out.push(match &m.status {
            ProbeStatus::Skipped(reason) => rec.field("status", "skipped").field("reason", reason),
            ProbeStatus::Failed(e) => rec.field("status", "failed").field("reason", e.kind()),
            ProbeStatus::Certified { certificate, largest_n } => rec
                .field("status", "certified")
                .field("largest_n", largest_n)
                .field("d_f_h", certificate.d_f_h)
                .vec_field("xhat", &certificate.xhat),
        });
    }
    out
}

pub fn replication_records(r: &ReplicationReport) -> Vec<Record> {
    r.outcomes
        .iter()
        .map(|o| {
            Record::new("assertion")
                .field("label", &r.label)
                .field("name", &o.name)
                .field("basis", o.basis.as_str())
                .field("result", if o.passed { "pass" } else { "fail" })
                .field("detail", &o.detail)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_layout() {
        let r = Record::new("x").field("a", 1.5).vec_field("v", &[1.0, -0.25, -0.0]).field("m", "two\nlines");
        assert_eq!(r.render(), "record=x\na=1.5\nv=[1,-0.25,0]\nm=two\\nlines\n");
        let both = render(&[Record::new("a"), Record::new("b")]);
        assert_eq!(both, "record=a\n\nrecord=b\n");
    }
}

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::weylalg::{Obstruction, RootList};

/// Bumped whenever a field changes meaning or disappears.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuarticRecord {
    pub coeffs: [f64; 5],
    /// `|c_k|` relative to the quartic's reference magnitude.
    pub rel: [f64; 5],
    pub roots: RootList,
    pub petrov: String,
    /// Root multiplicity at the distinguished direction: `(1:0)` for SD, `t` for ASD.
    pub order_at_spinor: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub z_null: f64,
    pub z_parallel: f64,
    pub w_frobenius: f64,
    pub w_autoparallel: f64,
    pub w_parallel: f64,
    pub d_parallel: f64,
    pub h_frobenius: f64,
    pub ricci_null: f64,
    pub rps_discriminant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub point: [f64; 4],
    #[serde(rename = "S")]
    pub scalar: f64,
    /// Largest Riemann component, the scale for the relative residuals below.
    pub curvature_scale: f64,
    pub ricci_residual: f64,
    pub einstein_residual: f64,
    pub sd: Option<QuarticRecord>,
    pub asd: Option<QuarticRecord>,
    pub residuals: Option<Residuals>,
    pub obstruction: Option<Obstruction>,
    /// `|S − S_expected|` relative to the curvature scale, when the family predicts `S`.
    pub scalar_expected_gap: Option<f64>,
}

/// Maxima (or minima for root orders) over all points.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Summary {
    pub max_abs_scalar_rel: f64,
    pub max_ricci_residual: f64,
    pub max_einstein_residual: f64,
    pub max_sd_rel: Option<f64>,
    pub max_asd_rel: Option<f64>,
    pub min_sd_order_at_spinor: Option<usize>,
    pub min_asd_order_at_spinor: Option<usize>,
    pub sd_types: Vec<String>,
    pub asd_types: Vec<String>,
    pub max_z_null: Option<f64>,
    pub max_z_parallel: Option<f64>,
    pub max_w_frobenius: Option<f64>,
    pub max_w_parallel: Option<f64>,
    pub max_d_parallel: Option<f64>,
    pub max_h_frobenius: Option<f64>,
    pub max_ricci_null: Option<f64>,
    pub max_rps_discriminant: Option<f64>,
    pub max_obstruction_rel: Option<f64>,
    pub max_scalar_expected_gap: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Flags {
    pub walker_form: bool,
    #[serde(rename = "Z_parallel")]
    pub z_parallel: bool,
    #[serde(rename = "W_integrable")]
    pub w_integrable: bool,
    #[serde(rename = "W_parallel")]
    pub w_parallel: bool,
    #[serde(rename = "H_integrable")]
    pub h_integrable: bool,
    #[serde(rename = "sesquiWalker")]
    pub sesqui_walker: bool,
    #[serde(rename = "integrable_sesquiWalker")]
    pub integrable_sesqui_walker: bool,
    pub two_sided: bool,
    #[serde(rename = "SD")]
    pub sd: bool,
    pub ricci_null: bool,
    pub left_flat: bool,
    pub obstruction_zero: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictKind {
    #[serde(rename = "yes")]
    Yes,
    #[serde(rename = "no:H")]
    NoH,
    #[serde(rename = "no:WPS")]
    NoWps,
    #[serde(rename = "no:obstruction")]
    NoObstruction,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

impl VerdictKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictKind::Yes => "yes",
            VerdictKind::NoH => "no:H",
            VerdictKind::NoWps => "no:WPS",
            VerdictKind::NoObstruction => "no:obstruction",
            VerdictKind::Inconclusive => "inconclusive",
        }
    }
}

/// Whether the metric is locally conformally two-sided Walker.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub value: VerdictKind,
    pub reason: String,
}

/// Whether a tag promised by the family builder is borne out by the flags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expectation {
    pub tag: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub kind: String,
    pub components: Vec<(String, String)>,
    pub t_field: [String; 2],
    pub lo: [f64; 4],
    pub hi: [f64; 4],
    pub points: usize,
    pub seed: u64,
    pub jet_order: usize,
    pub zero_tol: f64,
    pub nonzero_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub label: String,
    pub config: ConfigEcho,
    /// Quartic normalization constant in use, `None` when no quantity needed it.
    pub kappa: Option<f64>,
    pub points: Vec<PointRecord>,
    pub summary: Summary,
    pub flags: Flags,
    #[serde(rename = "conformally_two_sided_verdict")]
    pub verdict: Verdict,
    pub expectations: Vec<Expectation>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Report> {
        serde_json::from_str(text)
    }

    /// Aligned plain-text summary.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let c = &self.config;
        let _ = writeln!(s, "{} [{}]", self.label, c.kind);
        for (k, v) in &c.components {
            let _ = writeln!(s, "  {k:<4} = {v}");
        }
        let _ = writeln!(s, "  t    = ({} : {})", c.t_field[0], c.t_field[1]);
        let _ = writeln!(s, "  {} points, seed {}, box {:?}..{:?}", c.points, c.seed, c.lo, c.hi);
        if let Some(k) = self.kappa {
            let _ = writeln!(s, "  kappa = {k:.12}");
        }
        let m = &self.summary;
        let row = |s: &mut String, name: &str, v: Option<f64>| {
            if let Some(v) = v {
                let _ = writeln!(s, "  {name:<22} {v:10.3e}");
            }
        };
        let _ = writeln!(s, "residuals (max over points)");
        row(&mut s, "S / scale", Some(m.max_abs_scalar_rel));
        row(&mut s, "ricci", Some(m.max_ricci_residual));
        row(&mut s, "einstein", Some(m.max_einstein_residual));
        row(&mut s, "sd quartic", m.max_sd_rel);
        row(&mut s, "asd quartic", m.max_asd_rel);
        row(&mut s, "Z null", m.max_z_null);
        row(&mut s, "Z parallel", m.max_z_parallel);
        row(&mut s, "W frobenius", m.max_w_frobenius);
        row(&mut s, "W parallel", m.max_w_parallel);
        row(&mut s, "D parallel", m.max_d_parallel);
        row(&mut s, "H frobenius", m.max_h_frobenius);
        row(&mut s, "ricci null", m.max_ricci_null);
        row(&mut s, "rps discriminant", m.max_rps_discriminant);
        row(&mut s, "psi2 - S/12", m.max_obstruction_rel);
        row(&mut s, "S - expected", m.max_scalar_expected_gap);
        if !m.sd_types.is_empty() {
            let _ = writeln!(s, "  {:<22} {}", "sd types", m.sd_types.join(" "));
            let _ = writeln!(s, "  {:<22} {}", "asd types", m.asd_types.join(" "));
        }
        let f = &self.flags;
        let _ = writeln!(s, "flags");
        for (name, v) in [
            ("walker_form", f.walker_form),
            ("Z_parallel", f.z_parallel),
            ("W_integrable", f.w_integrable),
            ("W_parallel", f.w_parallel),
            ("H_integrable", f.h_integrable),
            ("sesquiWalker", f.sesqui_walker),
            ("integrable_sesquiWalker", f.integrable_sesqui_walker),
            ("two_sided", f.two_sided),
            ("SD", f.sd),
            ("ricci_null", f.ricci_null),
            ("left_flat", f.left_flat),
            ("obstruction_zero", f.obstruction_zero),
        ] {
            let _ = writeln!(s, "  {name:<24} {}", if v { "yes" } else { "no" });
        }
        let _ = writeln!(s, "verdict: {} ({})", self.verdict.value.as_str(), self.verdict.reason);
        for e in &self.expectations {
            let _ = writeln!(s, "  expected {:<14} {}", e.tag, if e.holds { "ok" } else { "NOT MET" });
        }
        s
    }
}

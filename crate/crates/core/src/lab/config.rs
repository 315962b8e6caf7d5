use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::spec_file::{load_spec_file, parse_spec_file, SpecFile};
use crate::error::{Error, Result};
use crate::exprkit::{parse_expr, Expr};
use crate::families::{mk_cp_example, random_instance, Exclusion, FamilyInstance, Tag};
use crate::frames::ProjParam;
use crate::tensor::MetricSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
}

/// Where the metric comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum SpecSource {
    File(PathBuf),
    /// Spec-file text held in memory.
    Text(String),
    Family { name: String, seed: u64, degree: usize, f: Option<String> },
    Instance(Box<FamilyInstance>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    pub source: SpecSource,
    /// Overrides the spec's own β-plane field.
    pub t_field: Option<ProjParam>,
    pub lo: [f64; 4],
    pub hi: [f64; 4],
    pub points: usize,
    pub seed: u64,
    pub jet_order: usize,
    /// "≈ 0" threshold, relative to the natural scale of each quantity.
    pub zero_tol: f64,
    /// "≠ 0" threshold, same normalization.
    pub nonzero_tol: f64,
    pub format: OutputFormat,
}

impl AnalysisConfig {
    pub fn new(source: SpecSource) -> AnalysisConfig {
        AnalysisConfig {
            source,
            t_field: None,
            lo: [0.5; 4],
            hi: [1.5; 4],
            points: 20,
            seed: 42,
            jet_order: 3,
            zero_tol: 1e-7,
            nonzero_tol: 1e-3,
            format: OutputFormat::Json,
        }
    }

    pub fn for_instance(inst: &FamilyInstance) -> AnalysisConfig {
        AnalysisConfig::new(SpecSource::Instance(Box::new(inst.clone())))
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.points == 0 {
            return Err(Error::Config("point count must be positive".into()));
        }
        if !(2..=crate::exprkit::MAX_ORDER).contains(&self.jet_order) {
            return Err(Error::Config(format!("jet order must be in 2..={}", crate::exprkit::MAX_ORDER)));
        }
        if !(self.zero_tol > 0.0 && self.nonzero_tol > self.zero_tol) {
            return Err(Error::Config("tolerances must satisfy 0 < zero < nonzero".into()));
        }
        for i in 0..4 {
            if !(self.lo[i].is_finite() && self.hi[i].is_finite() && self.lo[i] < self.hi[i]) {
                return Err(Error::Config("sample box has an empty range".into()));
            }
        }
        Ok(())
    }
}

/// One metric to analyze together with its expected properties.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisTarget {
    pub label: String,
    pub spec: MetricSpec,
    pub t_field: ProjParam,
    pub exclude: Vec<Exclusion>,
    pub tags: Vec<Tag>,
    /// Closed forms to compare against, currently only `S`.
    pub expected: Vec<(String, Expr)>,
}

impl From<&FamilyInstance> for AnalysisTarget {
    fn from(inst: &FamilyInstance) -> AnalysisTarget {
        let mut label = inst.provenance.family.clone();
        if let Some(seed) = inst.provenance.seed {
            label += &format!(" (seed {seed})");
        }
        AnalysisTarget {
            label,
            spec: inst.spec.clone(),
            t_field: inst.t_field.clone(),
            exclude: inst.exclude.clone(),
            tags: inst.tags.clone(),
            expected: inst.provenance.expected.clone(),
        }
    }
}

/// Which sampling settings the caller fixed; a spec file's `[domain]` fills in the rest.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Explicit {
    pub domain: bool,
    pub points: bool,
    pub seed: bool,
}

fn from_file(label: String, f: SpecFile, cfg: &mut AnalysisConfig, explicit: Explicit) -> AnalysisTarget {
    if let (Some((lo, hi)), false) = (f.domain, explicit.domain) {
        cfg.lo = lo;
        cfg.hi = hi;
    }
    if let (Some(n), false) = (f.points, explicit.points) {
        cfg.points = n;
    }
    if let (Some(s), false) = (f.seed, explicit.seed) {
        cfg.seed = s;
    }
    AnalysisTarget {
        label,
        spec: f.spec,
        t_field: f.t_field.unwrap_or_else(|| ProjParam::fixed(0.0, 1.0)),
        exclude: f.exclude,
        tags: Vec::new(),
        expected: Vec::new(),
    }
}

/// Resolve the configured source into targets, letting a spec file's `[domain]` section
/// fill in whatever `explicit` leaves open.
pub fn resolve_targets(cfg: &mut AnalysisConfig, explicit: Explicit) -> Result<Vec<AnalysisTarget>> {
    let mut targets = match cfg.source.clone() {
        SpecSource::File(path) => {
            let f = load_spec_file(&path)?;
            vec![from_file(path.display().to_string(), f, cfg, explicit)]
        }
        SpecSource::Text(text) => {
            vec![from_file("inline".into(), parse_spec_file(&text)?, cfg, explicit)]
        }
        SpecSource::Family { name, seed, degree, f } => {
            if name == "cp" {
                let f = match f {
                    Some(text) => parse_expr(&text).map_err(|e| Error::Config(format!("--F {text}: {e}")))?,
                    None => random_instance("cp", seed, degree)?.provenance.coefficients[0].1.clone(),
                };
                let (g, h, _) = mk_cp_example(f)?;
                vec![AnalysisTarget::from(&g), AnalysisTarget::from(&h)]
            } else {
                if f.is_some() {
                    return Err(Error::Config("--F only applies to the cp family".into()));
                }
                vec![AnalysisTarget::from(&random_instance(&name, seed, degree)?)]
            }
        }
        SpecSource::Instance(inst) => vec![AnalysisTarget::from(inst.as_ref())],
    };
    if let Some(t) = &cfg.t_field {
        for target in &mut targets {
            target.t_field = t.clone();
        }
    }
    cfg.validate()?;
    for target in &targets {
        check_exclusions(cfg, &target.exclude)?;
    }
    Ok(targets)
}

fn check_exclusions(cfg: &AnalysisConfig, exclude: &[Exclusion]) -> Result<()> {
    for e in exclude {
        let i = "uvxy".find(e.var).ok_or_else(|| Error::Config(format!("exclusion on unknown coordinate {}", e.var)))?;
        if cfg.lo[i] <= e.value && e.value <= cfg.hi[i] {
            return Err(Error::Config(format!(
                "sample box [{}, {}] for {} contains the excluded locus {}={}",
                cfg.lo[i], cfg.hi[i], e.var, e.var, e.value
            )));
        }
    }
    Ok(())
}

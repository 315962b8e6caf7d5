use serde::{Deserialize, Serialize};

use crate::exprkit::{Expr, Var};
use crate::frames::ProjParam;
use crate::tensor::MetricSpec;

/// Properties a family promises; the analysis pipeline checks them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Tag {
    Walker,
    /// Z parallel and W(t) integrable.
    Sesqui,
    TwoSided,
    /// ASD Weyl curvature vanishes.
    Sd,
    RicciNull,
    /// β spinor `(0:1)` is a multiple root of the ASD quartic.
    MultipleWps,
    LeftFlat,
    Einstein,
    Type4Both,
}

impl Tag {
    pub fn name(self) -> &'static str {
        match self {
            Tag::Walker => "WALKER",
            Tag::Sesqui => "SESQUI",
            Tag::TwoSided => "TWO_SIDED",
            Tag::Sd => "SD",
            Tag::RicciNull => "RICCI_NULL",
            Tag::MultipleWps => "MULTIPLE_WPS",
            Tag::LeftFlat => "LEFT_FLAT",
            Tag::Einstein => "EINSTEIN",
            Tag::Type4Both => "TYPE4_BOTH",
        }
    }
}

/// A coordinate hyperplane `var = value` where some component has a pole.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Exclusion {
    pub var: char,
    pub value: f64,
}

impl Exclusion {
    pub fn new(var: Var, value: f64) -> Exclusion {
        Exclusion { var: var.name(), value }
    }
}

/// Where an instance came from.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Provenance {
    pub family: String,
    pub seed: Option<u64>,
    /// Named input coefficients in builder order.
    pub coefficients: Vec<(String, Expr)>,
    /// Closed forms the analysis should reproduce, e.g. `("S", 2h)`.
    pub expected: Vec<(String, Expr)>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyInstance {
    pub spec: MetricSpec,
    /// Default β-plane parameter.
    pub t_field: ProjParam,
    pub tags: Vec<Tag>,
    pub exclude: Vec<Exclusion>,
    pub provenance: Provenance,
}

impl FamilyInstance {
    pub(crate) fn new(spec: MetricSpec, family: &str, tags: &[Tag]) -> FamilyInstance {
        let mut inst = FamilyInstance {
            spec,
            t_field: ProjParam::fixed(0.0, 1.0),
            tags: Vec::new(),
            exclude: Vec::new(),
            provenance: Provenance { family: family.to_string(), ..Provenance::default() },
        };
        for t in tags {
            inst.tag(*t);
        }
        inst
    }

    pub fn has(&self, tag: Tag) -> bool {
        self.tags.contains(&tag)
    }

    pub(crate) fn tag(&mut self, tag: Tag) {
        if !self.has(tag) {
            self.tags.push(tag);
            self.tags.sort();
        }
    }

    pub fn with_seed(mut self, seed: u64) -> FamilyInstance {
        self.provenance.seed = Some(seed);
        self
    }

    /// Expected closed form registered under `name`.
    pub fn expected(&self, name: &str) -> Option<&Expr> {
        self.provenance.expected.iter().find(|(n, _)| n == name).map(|(_, e)| e)
    }
}

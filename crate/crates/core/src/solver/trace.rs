//! Proof traces: a header line followed by one JSON object per step.

use serde::{Deserialize, Serialize};

use super::mpoly::{MPoly, Sym};
use super::Caps;
use crate::algebra::Elem;
use crate::error::{Error, Result};
use crate::lemma::Correspondence;
use crate::nbhd::Triple;

/// How a propagated value follows from its triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Rule {
    /// `f(1) = 1`.
    Unit,
    /// `0 + 0 = 0` forces `f(0) = 0`.
    Zero,
    /// `f(c) = f(a) + f(b)`.
    Sum,
    /// `a + a = c` gives `f(a) = f(c) / 2`.
    Half,
    /// `f(a) = f(c) - f(b)`.
    DiffA,
    /// `f(b) = f(c) - f(a)`.
    DiffB,
    /// `f(c) = f(a) * f(b)`.
    Product,
    /// `f(a) = f(c) / f(b)` for a known nonzero constant `f(b)`.
    QuotientA,
    /// `f(b) = f(c) / f(a)` for a known nonzero constant `f(a)`.
    QuotientB,
}

/// One child of a case split with the symbol values it fixes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case {
    pub branch: String,
    pub assign: Vec<(Sym, Elem)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(
    tag = "kind",
    rename_all = "camelCase",
    rename_all_fields = "camelCase"
)]
pub enum Step {
    /// Work moves to this branch.
    Branch {
        branch: String,
    },
    Propagate {
        branch: String,
        rule: Rule,
        triple: Option<Triple>,
        element: usize,
        value: MPoly,
    },
    IntroduceSymbol {
        branch: String,
        symbol: Sym,
        element: usize,
    },
    /// A triple whose three values are known, recorded as `poly = 0`.
    Equation {
        branch: String,
        id: u64,
        triple: Triple,
        poly: MPoly,
    },
    SolveLinear {
        branch: String,
        equation: u64,
        symbol: Sym,
        value: MPoly,
    },
    SolveUnivariate {
        branch: String,
        equation: u64,
        symbol: Sym,
        roots: Vec<Elem>,
        complete: bool,
        method: String,
    },
    ApplyLemma {
        branch: String,
        equation: u64,
        lemma: String,
        correspondence: Vec<Correspondence>,
        cases: Vec<Vec<(Sym, Elem)>>,
    },
    CaseSplit {
        branch: String,
        cases: Vec<Case>,
    },
    MembershipReject {
        branch: String,
        element: usize,
        value: Elem,
    },
    Contradiction {
        branch: String,
        equation: u64,
    },
    Conclude {
        branch: String,
        element: usize,
        value: Elem,
    },
}

impl Step {
    pub fn branch(&self) -> &str {
        match self {
            Step::Branch { branch }
            | Step::Propagate { branch, .. }
            | Step::IntroduceSymbol { branch, .. }
            | Step::Equation { branch, .. }
            | Step::SolveLinear { branch, .. }
            | Step::SolveUnivariate { branch, .. }
            | Step::ApplyLemma { branch, .. }
            | Step::CaseSplit { branch, .. }
            | Step::MembershipReject { branch, .. }
            | Step::Contradiction { branch, .. }
            | Step::Conclude { branch, .. } => branch,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Step::Branch { .. } => "branch",
            Step::Propagate { .. } => "propagate",
            Step::IntroduceSymbol { .. } => "introduceSymbol",
            Step::Equation { .. } => "equation",
            Step::SolveLinear { .. } => "solveLinear",
            Step::SolveUnivariate { .. } => "solveUnivariate",
            Step::ApplyLemma { .. } => "applyLemma",
            Step::CaseSplit { .. } => "caseSplit",
            Step::MembershipReject { .. } => "membershipReject",
            Step::Contradiction { .. } => "contradiction",
            Step::Conclude { .. } => "conclude",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TraceHeader {
    pub elements: Vec<Elem>,
    pub distinguished: usize,
    pub universe: String,
    pub verdict: String,
    /// Lemmas applied anywhere in the trace.
    pub lemmas: Vec<String>,
    /// Some applied lemma is cited rather than proved by enumeration.
    pub conditional: bool,
    pub caps: Caps,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub header: TraceHeader,
    pub steps: Vec<Step>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename = "header")]
struct HeaderLine {
    #[serde(flatten)]
    header: TraceHeader,
}

impl Trace {
    pub fn to_jsonl(&self) -> String {
        let mut out = serde_json::to_string(&HeaderLine {
            header: self.header.clone(),
        })
        .expect("header serializes");
        out.push('\n');
        for s in &self.steps {
            out.push_str(&serde_json::to_string(s).expect("step serializes"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let first = lines
            .next()
            .ok_or_else(|| Error::Json("empty trace".into()))?;
        let header = serde_json::from_str::<HeaderLine>(first)?.header;
        let steps = lines
            .map(serde_json::from_str)
            .collect::<std::result::Result<Vec<Step>, _>>()?;
        Ok(Trace { header, steps })
    }
}

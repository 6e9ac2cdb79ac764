//! Reports in text and JSON. Every number is written as an exact string.

use std::fmt::Write;

use serde::Serialize;

use arith_nbhd::algebra::RingDomain;
use arith_nbhd::constructions::{CorpusClaim, Expected};
use arith_nbhd::lemma::SanityReport;
use arith_nbhd::nbhd::Neighborhood;
use arith_nbhd::solver::{Verdict, VerificationResult, WitnessSource};

pub trait Report: Serialize {
    fn text(&self) -> String;
}

fn list(xs: &[String]) -> String {
    if xs.is_empty() {
        "-".into()
    } else {
        xs.join(",")
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MapReport {
    pub command: &'static str,
    pub elements: Vec<String>,
    pub element: String,
    pub codomain: String,
    pub arithmetic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<String>,
    pub moved: Vec<String>,
    pub moves_element: bool,
}

impl Report for MapReport {
    fn text(&self) -> String {
        let mut s = String::new();
        match &self.violation {
            None => writeln!(s, "arithmetic into {}", self.codomain).unwrap(),
            Some(v) => writeln!(s, "not arithmetic: {v}").unwrap(),
        }
        writeln!(s, "moved: {}", list(&self.moved)).unwrap();
        writeln!(s, "moves {}: {}", self.element, self.moves_element).unwrap();
        s
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NbhdReport {
    pub command: &'static str,
    pub elements: Vec<String>,
    pub element: String,
    pub universe: String,
    pub verdict: String,
    pub lemmas: Vec<String>,
    pub conditional: bool,
    pub steps: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_source: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assignments: Option<Vec<(String, String)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub residual: Vec<String>,
    /// Value reached for each element, `null` when never determined.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub partial: Vec<(String, Option<String>)>,
}

impl NbhdReport {
    pub fn new(set: &Neighborhood, universe: &RingDomain, result: &VerificationResult) -> Self {
        let header = &result.trace.header;
        let mut r = NbhdReport {
            command: "verify-nbhd",
            elements: set.elements().iter().map(|e| e.to_string()).collect(),
            element: set.distinguished().to_string(),
            universe: universe.tag(),
            verdict: result.verdict.tag().to_string(),
            lemmas: header.lemmas.clone(),
            conditional: header.conditional,
            steps: result.trace.steps.len().to_string(),
            trace: None,
            witness: None,
            witness_source: None,
            witness_name: None,
            assignments: None,
            reason: None,
            residual: Vec::new(),
            partial: Vec::new(),
        };
        match &result.verdict {
            Verdict::Fixed => {}
            Verdict::Moved { witness, source } => {
                r.witness_source = Some(
                    match source {
                        WitnessSource::Derived => "derived",
                        WitnessSource::Hint => "hint",
                    }
                    .into(),
                );
                r.assignments = Some(
                    witness
                        .iter()
                        .map(|(x, y)| (x.to_string(), y.to_string()))
                        .collect(),
                );
            }
            Verdict::Unknown {
                reason,
                residual,
                partial,
            } => {
                r.reason = Some(reason.clone());
                r.residual = residual.iter().map(|p| p.to_string()).collect();
                r.partial = partial
                    .iter()
                    .map(|(e, v)| (e.to_string(), v.as_ref().map(|p| p.to_string())))
                    .collect();
            }
        }
        r
    }
}

impl Report for NbhdReport {
    fn text(&self) -> String {
        let mut s = String::new();
        writeln!(
            s,
            "element {} inside {}: {}",
            self.element, self.universe, self.verdict
        )
        .unwrap();
        writeln!(
            s,
            "lemmas: {}{}",
            list(&self.lemmas),
            if self.conditional { " (cited)" } else { "" }
        )
        .unwrap();
        writeln!(s, "steps: {}", self.steps).unwrap();
        if let Some(t) = &self.trace {
            writeln!(s, "trace: {t}").unwrap();
        }
        if let Some(w) = &self.witness {
            let by = self
                .witness_name
                .as_deref()
                .or(self.witness_source.as_deref())
                .unwrap_or("-");
            writeln!(s, "witness ({by}): {w}").unwrap();
            for (x, y) in self.assignments.iter().flatten() {
                writeln!(s, "  {x} -> {y}").unwrap();
            }
        }
        if let Some(r) = &self.reason {
            writeln!(s, "reason: {r}").unwrap();
            for p in &self.residual {
                writeln!(s, "  residual: {p} = 0").unwrap();
            }
        }
        s
    }
}

#[derive(Serialize)]
pub struct GenReport {
    pub command: &'static str,
    pub files: Vec<String>,
}

impl Report for GenReport {
    fn text(&self) -> String {
        self.files.iter().map(|f| format!("wrote {f}\n")).collect()
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CorpusRow {
    pub id: String,
    pub family: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<String>,
    pub element: String,
    pub universe: String,
    pub expected: String,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// The named witness is arithmetic, lands in the universe and moves the element.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_valid: Option<bool>,
    pub lemmas: Vec<String>,
    pub conditional: bool,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<String>,
}

impl CorpusRow {
    pub fn new(c: &CorpusClaim) -> Self {
        CorpusRow {
            id: c.id.clone(),
            family: c.spec.family.clone(),
            n: c.spec.n.map(|n| n.to_string()),
            element: c.element.to_string(),
            universe: c.universe.tag(),
            expected: match c.expected {
                Expected::Fixed => "fixed",
                Expected::Moved => "moved",
            }
            .into(),
            verdict: String::new(),
            source: None,
            witness: c.witness.clone(),
            witness_valid: None,
            lemmas: Vec::new(),
            conditional: false,
            ok: false,
            reason: None,
            trace: None,
            witness_file: None,
            elapsed_ms: None,
        }
    }
}

#[derive(Serialize)]
pub struct CorpusReport {
    pub command: &'static str,
    pub total: String,
    pub passed: String,
    pub failed: String,
    pub rows: Vec<CorpusRow>,
}

impl Report for CorpusReport {
    fn text(&self) -> String {
        let width = self
            .rows
            .iter()
            .map(|r| r.id.len())
            .max()
            .unwrap_or(2)
            .max(2);
        let mut s = String::new();
        writeln!(
            s,
            "{:<width$}  {:<8} {:<8} {:<8} {:<10} {}",
            "id", "expected", "verdict", "source", "lemmas", "ok"
        )
        .unwrap();
        for r in &self.rows {
            write!(
                s,
                "{:<width$}  {:<8} {:<8} {:<8} {:<10} {}",
                r.id,
                r.expected,
                r.verdict,
                r.source.as_deref().unwrap_or("-"),
                list(&r.lemmas),
                if r.ok { "ok" } else { "FAIL" }
            )
            .unwrap();
            if let Some(ms) = &r.elapsed_ms {
                write!(s, " {ms}ms").unwrap();
            }
            if let Some(reason) = r.reason.as_deref().filter(|_| !r.ok) {
                write!(s, "  ({reason})").unwrap();
            }
            s.push('\n');
        }
        writeln!(
            s,
            "{} claims, {} passed, {} failed",
            self.total, self.passed, self.failed
        )
        .unwrap();
        s
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchReport {
    pub command: &'static str,
    pub element: String,
    pub codomain: String,
    pub height: String,
    pub found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assignments: Option<Vec<(String, String)>>,
}

impl Report for SearchReport {
    fn text(&self) -> String {
        let mut s = String::new();
        match &self.witness {
            Some(w) => {
                writeln!(
                    s,
                    "found a map into {} moving {}: {w}",
                    self.codomain, self.element
                )
                .unwrap();
                for (x, y) in self.assignments.iter().flatten() {
                    writeln!(s, "  {x} -> {y}").unwrap();
                }
            }
            None => writeln!(
                s,
                "no map into {} moving {} with values of height <= {}",
                self.codomain, self.element, self.height
            )
            .unwrap(),
        }
        s
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LemmaRow {
    pub lemma: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<SanityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl LemmaRow {
    pub fn passed(report: SanityReport) -> Self {
        LemmaRow {
            lemma: report.lemma.clone(),
            ok: true,
            report: Some(report),
            error: None,
        }
    }

    pub fn failed(id: &str, error: String) -> Self {
        LemmaRow {
            lemma: id.to_string(),
            ok: false,
            report: None,
            error: Some(error),
        }
    }
}

#[derive(Serialize)]
pub struct LemmaReport {
    pub command: &'static str,
    pub rows: Vec<LemmaRow>,
}

impl Report for LemmaReport {
    fn text(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            match (&r.report, &r.error) {
                (Some(rep), _) => writeln!(
                    s,
                    "{} ok: {} up to {}, {} solutions{}",
                    r.lemma,
                    rep.method,
                    rep.bound,
                    rep.found.len(),
                    if rep.proof { ", complete" } else { "" }
                )
                .unwrap(),
                (None, Some(e)) => writeln!(s, "{} FAILED: {e}", r.lemma).unwrap(),
                (None, None) => {}
            }
        }
        s
    }
}

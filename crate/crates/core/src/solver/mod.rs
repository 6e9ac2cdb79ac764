//! Exhaustive propagation over the constraint system of a neighbourhood.
//!
//! The engine names unknown values `f(e)` by symbols, propagates sums and
//! products, and splits on the roots of the equations that appear. Every
//! closed branch ends in a contradiction, a value outside the universe, or
//! `f(r) = r`; a branch that determines a consistent map moving `r` yields a
//! witness.

mod engine;
pub mod mpoly;
pub mod replay;
pub mod search;
pub mod trace;
pub mod universe;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{Elem, RingDomain};
use crate::error::{Error, Result};
use crate::lemma::LemmaBase;
use crate::nbhd::{is_arithmetic_on, moves, ArithmeticMap, ConstraintSystem, Neighborhood};
use engine::{Engine, Outcome};
use mpoly::MPoly;
use trace::{Trace, TraceHeader};
use universe::{Universe, UniverseRegistry};

pub use replay::replay;
pub use search::search_witness;

/// Work limits. Exceeding one turns the answer into `Unknown`, never into a
/// wrong verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Most cases a single split may open.
    pub splits: usize,
    /// Deepest nesting of splits.
    pub depth: usize,
    /// Highest degree of a univariate equation handed to root finding.
    pub degree: usize,
    /// Largest set accepted.
    pub size: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            splits: 8,
            depth: 6,
            degree: 6,
            size: 64,
        }
    }
}

impl FromStr for Caps {
    type Err = Error;

    /// `splits=8,depth=6,degree=6,size=64`; omitted keys keep their default.
    fn from_str(s: &str) -> Result<Self> {
        let mut caps = Caps::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("cap `{part}` is not key=value")))?;
            let v: usize =
                v.trim().parse().ok().filter(|&v| v > 0).ok_or_else(|| {
                    Error::Parse(format!("cap `{part}` needs a positive integer"))
                })?;
            match k.trim() {
                "splits" => caps.splits = v,
                "depth" => caps.depth = v,
                "degree" => caps.degree = v,
                "size" => caps.size = v,
                other => return Err(Error::Parse(format!("unknown cap `{other}`"))),
            }
        }
        Ok(caps)
    }
}

impl fmt::Display for Caps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "splits={},depth={},degree={},size={}",
            self.splits, self.depth, self.degree, self.size
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessSource {
    /// Read off a branch of the search.
    Derived,
    /// Supplied by the caller and validated.
    Hint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Fixed,
    Moved {
        witness: ArithmeticMap,
        source: WitnessSource,
    },
    Unknown {
        reason: String,
        residual: Vec<MPoly>,
        /// Values reached for each element, `None` when never determined.
        partial: Vec<(Elem, Option<MPoly>)>,
    },
}

impl Verdict {
    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::Fixed => "fixed",
            Verdict::Moved { .. } => "moved",
            Verdict::Unknown { .. } => "unknown",
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerificationResult {
    pub verdict: Verdict,
    pub trace: Trace,
}

impl VerificationResult {
    pub fn is_fixed(&self) -> bool {
        matches!(self.verdict, Verdict::Fixed)
    }

    pub fn is_moved(&self) -> bool {
        matches!(self.verdict, Verdict::Moved { .. })
    }
}

/// Decides neighbourhood claims.
pub struct Verifier {
    lemmas: LemmaBase,
    universes: UniverseRegistry,
    caps: Caps,
}

impl Default for Verifier {
    fn default() -> Self {
        Verifier::new(LemmaBase::shipped(), Caps::default())
    }
}

impl Verifier {
    pub fn new(lemmas: LemmaBase, caps: Caps) -> Self {
        Verifier {
            lemmas,
            universes: UniverseRegistry::default(),
            caps,
        }
    }

    pub fn with_universes(mut self, universes: UniverseRegistry) -> Self {
        self.universes = universes;
        self
    }

    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    pub fn lemmas(&self) -> &LemmaBase {
        &self.lemmas
    }

    pub fn verify(&self, set: &Neighborhood, universe: &RingDomain) -> Result<VerificationResult> {
        self.verify_with_hints(set, universe, &[])
    }

    /// Like [`Verifier::verify`]; when the search is inconclusive, the first
    /// hint that restricts to an arithmetic map on `set` moving `r` inside
    /// the universe becomes the witness.
    pub fn verify_with_hints(
        &self,
        set: &Neighborhood,
        universe: &RingDomain,
        hints: &[ArithmeticMap],
    ) -> Result<VerificationResult> {
        let strategy = self.universes.get(universe)?;
        let cs = ConstraintSystem::extract(set);
        let target = set.distinguished_index();
        let mut header = TraceHeader {
            elements: set.elements().to_vec(),
            distinguished: target,
            universe: universe.tag(),
            verdict: String::new(),
            lemmas: Vec::new(),
            conditional: false,
            caps: self.caps,
        };
        let (outcome, steps) = if set.len() > self.caps.size {
            let reason = format!("set has {} elements, above the size cap", set.len());
            let partial = vec![None; set.len()];
            (
                Outcome::Unknown {
                    reason,
                    residual: Vec::new(),
                    partial,
                },
                Vec::new(),
            )
        } else {
            let mut engine = Engine::new(&cs, target, strategy.as_ref(), &self.lemmas, &self.caps);
            let outcome = engine.run(set.field().cloned())?;
            header.lemmas = engine.used_lemmas.iter().cloned().collect();
            header.conditional = header
                .lemmas
                .iter()
                .any(|id| self.lemmas.get(id).is_some_and(|l| !l.fully_enumerable));
            (outcome, engine.steps)
        };
        let valid_hint = hints
            .iter()
            .find_map(|h| validate_hint(h, set, &cs, strategy.as_ref()));
        let verdict = match outcome {
            Outcome::Fixed => {
                if valid_hint.is_some() {
                    return Err(Error::Unsupported(
                        "internal inconsistency: fixed verdict contradicted by a valid witness"
                            .into(),
                    ));
                }
                Verdict::Fixed
            }
            Outcome::Moved(values) => Verdict::Moved {
                witness: ArithmeticMap::from_pairs(
                    universe.clone(),
                    set.elements().iter().cloned().zip(values),
                ),
                source: WitnessSource::Derived,
            },
            Outcome::Unknown {
                reason,
                residual,
                partial,
            } => match valid_hint {
                Some(witness) => Verdict::Moved {
                    witness,
                    source: WitnessSource::Hint,
                },
                None => Verdict::Unknown {
                    reason,
                    residual,
                    partial: set.elements().iter().cloned().zip(partial).collect(),
                },
            },
        };
        header.verdict = verdict.tag().to_string();
        // a validated witness does not rest on any cited fact
        header.conditional &= matches!(verdict, Verdict::Fixed);
        Ok(VerificationResult {
            verdict,
            trace: Trace { header, steps },
        })
    }
}

/// The hint restricted to `set` with the universe as codomain, when it is
/// arithmetic and moves the distinguished element.
fn validate_hint(
    hint: &ArithmeticMap,
    set: &Neighborhood,
    cs: &ConstraintSystem,
    universe: &dyn Universe,
) -> Option<ArithmeticMap> {
    let mut map = ArithmeticMap::new(universe.domain().clone());
    for e in set.elements() {
        let v = hint.get(e)?;
        if !universe.contains(v) {
            return None;
        }
        map.insert(e.clone(), v.clone());
    }
    let arithmetic = matches!(is_arithmetic_on(&map, cs), Ok(None));
    (arithmetic && moves(&map, set.distinguished()).ok()?).then_some(map)
}

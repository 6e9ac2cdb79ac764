//! Mechanical verification and refutation of arithmetic neighbourhoods.
//!
//! A map `f: A -> K` on a finite subset of a ring is *arithmetic* when it
//! sends 1 to 1 (if `1` is in `A`) and preserves every sum and product whose
//! operands and result all lie in `A`. `A` is an arithmetic neighbourhood of
//! `r` inside `K` when every such map fixes `r`. This crate decides such
//! claims with a replayable proof trace, or exhibits a witness map that moves
//! `r`.

pub mod algebra;
pub mod constructions;
pub mod error;
pub mod expr;
pub mod io;
pub mod lemma;
pub mod nbhd;
pub mod solver;

pub use error::{Error, Result};

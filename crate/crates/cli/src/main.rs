//! `nbhd`: verify maps and neighbourhood claims, generate the families, run
//! the claim corpus and the witness search.
//!
//! Exit codes: 0 verified or arithmetic, 1 refuted, 2 unknown, 3 usage
//! error, 4 input error.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use arith_nbhd::solver::Caps;

#[derive(Parser, Debug)]
#[command(
    name = "nbhd",
    version,
    about = "Exact checks of arithmetic neighbourhoods"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Work limits as `splits=8,depth=6,degree=6,size=64`.
    #[arg(long, env = "NBHD_CAPS", global = true)]
    pub caps: Option<Caps>,
    /// Lemma base file replacing the shipped one.
    #[arg(long, global = true)]
    pub lemmas: Option<PathBuf>,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
}

/// Where the set comes from: a set file or a family member.
#[derive(Args, Debug, Clone)]
pub struct SetSource {
    /// Set file (JSON).
    #[arg(long, conflicts_with = "family")]
    pub set: Option<PathBuf>,
    /// Family name, e.g. S, D, J.
    #[arg(long)]
    pub family: Option<String>,
    /// Family parameter.
    #[arg(long)]
    pub n: Option<u64>,
    /// Distinguished element; overrides the one in a set file.
    #[arg(long, allow_hyphen_values = true)]
    pub element: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check that a map is arithmetic on a set.
    VerifyMap {
        #[command(flatten)]
        source: SetSource,
        /// Map file (JSON).
        #[arg(long, conflicts_with = "witness")]
        map: Option<PathBuf>,
        /// Named witness of the family.
        #[arg(long)]
        witness: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Decide whether every arithmetic map into the universe fixes the element.
    VerifyNbhd {
        #[command(flatten)]
        source: SetSource,
        /// Universe tag: Z, Q, R, C, Zi, Qsqrt<D>, Qpoly:<c0,c1,...>.
        #[arg(long)]
        universe: String,
        /// Candidate witness map files.
        #[arg(long)]
        hint: Vec<PathBuf>,
        /// Named witnesses to try; defaults to every witness of the family.
        #[arg(long)]
        witness: Vec<String>,
        /// Directory for the trace and witness files.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Write set and map files for a family member, or the claim manifest.
    Gen {
        #[command(flatten)]
        source: SetSource,
        /// Witness maps to write.
        #[arg(long)]
        witness: Vec<String>,
        /// Write every witness defined on the family.
        #[arg(long)]
        all_witnesses: bool,
        /// Write the claim manifest to this file instead.
        #[arg(long, conflicts_with_all = ["set", "family"])]
        manifest: Option<PathBuf>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run the claim corpus.
    Corpus {
        /// Run every claim.
        #[arg(long)]
        all: bool,
        /// Run claims whose id contains this text.
        #[arg(long)]
        filter: Option<String>,
        /// Manifest file replacing the built-in corpus.
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Add wall-clock times to the report.
        #[arg(long)]
        timings: bool,
        /// Worker threads; 0 picks the number of cores.
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Write traces and witnesses here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Search for a map that moves the element, with values of bounded height.
    Search {
        #[command(flatten)]
        source: SetSource,
        /// Codomain tag: Z, Zi, Q or a number field.
        #[arg(long)]
        codomain: String,
        #[arg(long, default_value_t = 40)]
        height: u64,
        /// Directory for the witness file.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Re-check lemma solution sets by enumeration.
    LemmaCheck {
        /// Only these lemma ids.
        #[arg(long)]
        id: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

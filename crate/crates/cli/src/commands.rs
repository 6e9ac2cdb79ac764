use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use arith_nbhd::algebra::RingDomain;
use arith_nbhd::constructions::{
    corpus, CorpusClaim, Expected, FamilyRegistry, FamilySpec, WitnessRegistry,
};
use arith_nbhd::expr::parse_elem;
use arith_nbhd::io::{read_manifest, read_map, read_set, write_json, MapFile, SetFile};
use arith_nbhd::lemma::{sanity_check, LemmaBase};
use arith_nbhd::nbhd::{is_arithmetic, moves, ArithmeticMap, Neighborhood};
use arith_nbhd::solver::{search_witness, Verdict, Verifier, WitnessSource};

use crate::report::{
    CorpusReport, CorpusRow, LemmaReport, LemmaRow, MapReport, NbhdReport, Report, SearchReport,
};
use crate::{Command, Common, SetSource};

pub const VERIFIED: i32 = 0;
pub const REFUTED: i32 = 1;
pub const UNKNOWN: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(arith_nbhd::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 3,
            CliError::Input(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Input(e) => write!(f, "{e}"),
        }
    }
}

impl From<arith_nbhd::Error> for CliError {
    fn from(e: arith_nbhd::Error) -> Self {
        CliError::Input(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub fn run(command: Command) -> Result<i32> {
    match command {
        Command::VerifyMap {
            source,
            map,
            witness,
            common,
        } => verify_map(&source, map.as_deref(), witness.as_deref(), &common),
        Command::VerifyNbhd {
            source,
            universe,
            hint,
            witness,
            out,
            common,
        } => verify_nbhd(&source, &universe, &hint, &witness, &out, &common),
        Command::Gen {
            source,
            witness,
            all_witnesses,
            manifest,
            out,
            common,
        } => gen(
            &source,
            &witness,
            all_witnesses,
            manifest.as_deref(),
            &out,
            &common,
        ),
        Command::Corpus {
            all,
            filter,
            manifest,
            timings,
            threads,
            out,
            common,
        } => run_corpus(
            all,
            filter.as_deref(),
            manifest.as_deref(),
            timings,
            threads,
            out.as_deref(),
            &common,
        ),
        Command::Search {
            source,
            codomain,
            height,
            out,
            common,
        } => search(&source, &codomain, height, &out, &common),
        Command::LemmaCheck { id, common } => lemma_check(&id, &common),
    }
}

fn emit(report: &impl Report, common: &Common) {
    let text = if common.json {
        serde_json::to_string_pretty(report).expect("report serializes") + "\n"
    } else {
        report.text()
    };
    // a closed pipe is not worth a panic
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn lemma_base(common: &Common) -> Result<LemmaBase> {
    match &common.lemmas {
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| arith_nbhd::Error::Io(format!("{}: {e}", p.display())))?;
            Ok(LemmaBase::from_json(&text)?)
        }
        None => Ok(LemmaBase::shipped()),
    }
}

fn verifier(common: &Common) -> Result<Verifier> {
    Ok(Verifier::new(
        lemma_base(common)?,
        common.caps.unwrap_or_default(),
    ))
}

/// File-name friendly rendering of a label.
fn slug(s: &str) -> String {
    s.chars()
        .map(|c| match c {
            '-' => 'm',
            c if c.is_ascii_alphanumeric() => c,
            _ => '_',
        })
        .collect()
}

/// `S3`, `Dstatic`: the family with its parameter, for file names.
fn spec_label(spec: &FamilySpec) -> String {
    format!(
        "{}{}",
        spec.family,
        spec.n.map(|n| n.to_string()).unwrap_or_default()
    )
}

fn out_file(dir: &Path, name: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)
        .map_err(|e| arith_nbhd::Error::Io(format!("{}: {e}", dir.display())))?;
    Ok(dir.join(name))
}

struct Resolved {
    set: Neighborhood,
    /// Canonical family spec when the set came from a family.
    spec: Option<FamilySpec>,
    label: String,
}

fn resolve(src: &SetSource, families: &FamilyRegistry) -> Result<Resolved> {
    match (&src.set, &src.family) {
        (Some(path), _) => {
            let mut set = read_set(path)?;
            if let Some(e) = &src.element {
                set = set.with_distinguished(&parse_elem(e, set.field())?)?;
            }
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("set");
            let stem = stem.strip_suffix(".set").unwrap_or(stem);
            let label = match &src.element {
                Some(_) => format!("{stem}_{}", set.distinguished()),
                None => stem.to_string(),
            };
            Ok(Resolved {
                set,
                spec: None,
                label,
            })
        }
        (None, Some(name)) => {
            let canonical = families.get(name)?.name();
            let spec = FamilySpec::new(canonical, src.n);
            let r = match &src.element {
                Some(e) => parse_elem(e, None)?,
                None => {
                    let claimed = families.claimed(&spec)?;
                    match claimed.as_slice() {
                        [only] => only.clone(),
                        _ => {
                            let list: Vec<String> = claimed.iter().map(|e| e.to_string()).collect();
                            return Err(CliError::Usage(format!(
                                "--element is required for {spec}; claims concern {}",
                                list.join(", ")
                            )));
                        }
                    }
                }
            };
            let set = families.neighborhood(&spec, &r)?;
            let label = format!("{}_{r}", spec_label(&spec));
            Ok(Resolved {
                set,
                spec: Some(spec),
                label,
            })
        }
        (None, None) => Err(CliError::Usage("give --set FILE or --family NAME".into())),
    }
}

fn parse_domain(tag: &str) -> Result<RingDomain> {
    Ok(tag.parse()?)
}

fn witness_names_for(spec: &FamilySpec, witnesses: &WitnessRegistry) -> Vec<&'static str> {
    witnesses
        .names()
        .into_iter()
        .filter(|n| {
            witnesses
                .get(n)
                .is_ok_and(|w| w.families().contains(&spec.family.as_str()))
        })
        .collect()
}

fn assignments(map: &ArithmeticMap) -> Vec<(String, String)> {
    map.iter()
        .map(|(x, y)| (x.to_string(), y.to_string()))
        .collect()
}

fn verify_map(
    src: &SetSource,
    map: Option<&Path>,
    witness: Option<&str>,
    common: &Common,
) -> Result<i32> {
    let families = FamilyRegistry::default();
    let r = resolve(src, &families)?;
    let map = match (map, witness) {
        (Some(p), _) => read_map(p, r.set.field())?,
        (None, Some(name)) => {
            let spec = r
                .spec
                .as_ref()
                .ok_or_else(|| CliError::Usage("--witness needs --family".into()))?;
            WitnessRegistry::default().witness_map(&families, name, spec)?
        }
        (None, None) => return Err(CliError::Usage("give --map FILE or --witness NAME".into())),
    };
    let violation = is_arithmetic(&map, &r.set)?;
    let moved = map.moved()?.iter().map(|e| e.to_string()).collect();
    let report = MapReport {
        command: "verify-map",
        elements: r.set.elements().iter().map(|e| e.to_string()).collect(),
        element: r.set.distinguished().to_string(),
        codomain: map.codomain().tag(),
        arithmetic: violation.is_none(),
        violation: violation.as_ref().map(|v| v.to_string()),
        moved,
        moves_element: moves(&map, r.set.distinguished())?,
    };
    emit(&report, common);
    Ok(if violation.is_none() {
        VERIFIED
    } else {
        REFUTED
    })
}

fn verify_nbhd(
    src: &SetSource,
    universe: &str,
    hint_files: &[PathBuf],
    witness: &[String],
    out: &Path,
    common: &Common,
) -> Result<i32> {
    let families = FamilyRegistry::default();
    let witnesses = WitnessRegistry::default();
    let r = resolve(src, &families)?;
    let universe = parse_domain(universe)?;
    let mut hints: Vec<(String, ArithmeticMap)> = Vec::new();
    for p in hint_files {
        hints.push((p.display().to_string(), read_map(p, r.set.field())?));
    }
    let names: Vec<String> = match (&r.spec, witness.is_empty()) {
        (Some(spec), true) => witness_names_for(spec, &witnesses)
            .into_iter()
            .map(String::from)
            .collect(),
        _ => witness.to_vec(),
    };
    for name in &names {
        let spec = r
            .spec
            .as_ref()
            .ok_or_else(|| CliError::Usage("--witness needs --family".into()))?;
        let w = witnesses.get(name)?;
        hints.push((
            w.name().to_string(),
            witnesses.witness_map(&families, name, spec)?,
        ));
    }
    let maps: Vec<ArithmeticMap> = hints.iter().map(|(_, m)| m.clone()).collect();
    let result = verifier(common)?.verify_with_hints(&r.set, &universe, &maps)?;
    let stem = slug(&format!("{}_{}", r.label, universe.tag()));
    let mut report = NbhdReport::new(&r.set, &universe, &result);
    let code = match &result.verdict {
        Verdict::Fixed => {
            let path = out_file(out, &format!("{stem}.trace.jsonl"))?;
            fs::write(&path, result.trace.to_jsonl())
                .map_err(|e| arith_nbhd::Error::Io(format!("{}: {e}", path.display())))?;
            report.trace = Some(path.display().to_string());
            VERIFIED
        }
        Verdict::Moved { witness, source } => {
            let path = out_file(out, &format!("{stem}.witness.json"))?;
            write_json(&path, &MapFile::from_map(witness))?;
            report.witness = Some(path.display().to_string());
            if *source == WitnessSource::Hint {
                report.witness_name = hints
                    .iter()
                    .find(|(_, h)| r.set.elements().iter().all(|e| h.get(e) == witness.get(e)))
                    .map(|(n, _)| n.clone());
            }
            REFUTED
        }
        Verdict::Unknown { .. } => UNKNOWN,
    };
    emit(&report, common);
    Ok(code)
}

fn gen(
    src: &SetSource,
    witness: &[String],
    all_witnesses: bool,
    manifest: Option<&Path>,
    out: &Path,
    common: &Common,
) -> Result<i32> {
    let mut files = Vec::new();
    if let Some(path) = manifest {
        write_json(path, &corpus())?;
        files.push(path.display().to_string());
        emit(
            &crate::report::GenReport {
                command: "gen",
                files,
            },
            common,
        );
        return Ok(VERIFIED);
    }
    let families = FamilyRegistry::default();
    let witnesses = WitnessRegistry::default();
    let name = src
        .family
        .as_deref()
        .ok_or_else(|| CliError::Usage("gen needs --family NAME or --manifest FILE".into()))?;
    let spec = FamilySpec::new(families.get(name)?.name(), src.n);
    let elements = families.elements(&spec)?;
    let targets = match &src.element {
        Some(e) => vec![parse_elem(e, None)?],
        None => families.claimed(&spec)?,
    };
    for r in targets {
        let set = Neighborhood::new(elements.clone(), r.clone())?;
        let path = out_file(
            out,
            &format!("{}.set.json", slug(&format!("{}_{r}", spec_label(&spec)))),
        )?;
        write_json(&path, &SetFile::from_set(&set))?;
        files.push(path.display().to_string());
    }
    let mut names: Vec<String> = witness.to_vec();
    if all_witnesses {
        names.extend(
            witness_names_for(&spec, &witnesses)
                .into_iter()
                .map(String::from),
        );
    }
    for w in names {
        let map = witnesses.witness_map(&families, &w, &spec)?;
        let canonical = witnesses.get(&w)?.name();
        let path = out_file(
            out,
            &format!("{}.{canonical}.map.json", slug(&spec_label(&spec))),
        )?;
        write_json(&path, &MapFile::from_map(&map))?;
        files.push(path.display().to_string());
    }
    emit(
        &crate::report::GenReport {
            command: "gen",
            files,
        },
        common,
    );
    Ok(VERIFIED)
}

fn check_claim(
    claim: &CorpusClaim,
    families: &FamilyRegistry,
    witnesses: &WitnessRegistry,
    verifier: &Verifier,
    out: Option<&Path>,
    timings: bool,
) -> CorpusRow {
    let mut row = CorpusRow::new(claim);
    let start = Instant::now();
    let outcome = (|| -> Result<()> {
        let set = families.neighborhood(&claim.spec, &claim.element)?;
        let mut hints = Vec::new();
        if let Some(name) = &claim.witness {
            let map = witnesses.witness_map(families, name, &claim.spec)?;
            let valid = is_arithmetic(&map, &set)?.is_none()
                && moves(&map, &claim.element)?
                && map.iter().all(|(_, v)| claim.universe.contains(v));
            row.witness_valid = Some(valid);
            hints.push(map);
        }
        let result = verifier.verify_with_hints(&set, &claim.universe, &hints)?;
        row.verdict = result.verdict.tag().to_string();
        row.lemmas = result.trace.header.lemmas.clone();
        row.conditional = result.trace.header.conditional;
        let stem = slug(&claim.id);
        match &result.verdict {
            Verdict::Moved { witness, source } => {
                row.source = Some(
                    if *source == WitnessSource::Hint {
                        "hint"
                    } else {
                        "derived"
                    }
                    .into(),
                );
                if let Some(dir) = out {
                    let path = out_file(dir, &format!("{stem}.witness.json"))?;
                    write_json(&path, &MapFile::from_map(witness))?;
                    row.witness_file = Some(path.display().to_string());
                }
            }
            Verdict::Fixed => {
                if let Some(dir) = out {
                    let path = out_file(dir, &format!("{stem}.trace.jsonl"))?;
                    fs::write(&path, result.trace.to_jsonl())
                        .map_err(|e| arith_nbhd::Error::Io(format!("{}: {e}", path.display())))?;
                    row.trace = Some(path.display().to_string());
                }
            }
            Verdict::Unknown { reason, .. } => row.reason = Some(reason.clone()),
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        row.verdict = "error".into();
        row.reason = Some(e.to_string());
    }
    let want = match claim.expected {
        Expected::Fixed => "fixed",
        Expected::Moved => "moved",
    };
    row.ok = row.verdict == want && row.witness_valid != Some(false);
    if timings {
        row.elapsed_ms = Some(start.elapsed().as_millis().to_string());
    }
    row
}

fn run_corpus(
    all: bool,
    filter: Option<&str>,
    manifest: Option<&Path>,
    timings: bool,
    threads: usize,
    out: Option<&Path>,
    common: &Common,
) -> Result<i32> {
    if !all && filter.is_none() {
        return Err(CliError::Usage("give --all or --filter TEXT".into()));
    }
    let claims = match manifest {
        Some(p) => read_manifest(p)?,
        None => corpus(),
    };
    let claims: Vec<CorpusClaim> = claims
        .into_iter()
        .filter(|c| filter.is_none_or(|f| c.id.contains(f)))
        .collect();
    let families = FamilyRegistry::default();
    let witnesses = WitnessRegistry::default();
    let verifier = verifier(common)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let rows: Vec<CorpusRow> = pool.install(|| {
        claims
            .par_iter()
            .map(|c| check_claim(c, &families, &witnesses, &verifier, out, timings))
            .collect()
    });
    let failed = rows.iter().filter(|r| !r.ok).count();
    let report = CorpusReport {
        command: "corpus",
        total: rows.len().to_string(),
        passed: (rows.len() - failed).to_string(),
        failed: failed.to_string(),
        rows,
    };
    emit(&report, common);
    Ok(if failed == 0 { VERIFIED } else { REFUTED })
}

fn search(
    src: &SetSource,
    codomain: &str,
    height: u64,
    out: &Path,
    common: &Common,
) -> Result<i32> {
    let r = resolve(src, &FamilyRegistry::default())?;
    let codomain = parse_domain(codomain)?;
    let found = search_witness(&r.set, &codomain, height)?;
    let mut report = SearchReport {
        command: "search",
        element: r.set.distinguished().to_string(),
        codomain: codomain.tag(),
        height: height.to_string(),
        found: found.is_some(),
        witness: None,
        assignments: found.as_ref().map(assignments),
    };
    if let Some(map) = &found {
        let path = out_file(
            out,
            &format!(
                "{}.search.json",
                slug(&format!("{}_{}", r.label, codomain.tag()))
            ),
        )?;
        write_json(&path, &MapFile::from_map(map))?;
        report.witness = Some(path.display().to_string());
    }
    emit(&report, common);
    Ok(if found.is_some() { REFUTED } else { UNKNOWN })
}

fn lemma_check(ids: &[String], common: &Common) -> Result<i32> {
    let base = lemma_base(common)?;
    for id in ids {
        if base.get(id).is_none() {
            return Err(CliError::Usage(format!("no lemma with id {id}")));
        }
    }
    let rows: Vec<LemmaRow> = base
        .lemmas()
        .iter()
        .filter(|l| ids.is_empty() || ids.contains(&l.id))
        .map(|l| match sanity_check(l) {
            Ok(rep) => LemmaRow::passed(rep),
            Err(e) => LemmaRow::failed(&l.id, e.to_string()),
        })
        .collect();
    let ok = rows.iter().all(|r| r.ok);
    emit(
        &LemmaReport {
            command: "lemma-check",
            rows,
        },
        common,
    );
    Ok(if ok { VERIFIED } else { REFUTED })
}

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use arith_nbhd::constructions::corpus;
use arith_nbhd::lemma::LemmaBase;
use arith_nbhd::solver::{replay, trace::Trace};

fn nbhd(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nbhd"))
        .args(args)
        .current_dir(dir)
        .env_remove("NBHD_CAPS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn fixed_claim_writes_a_replayable_trace() {
    let dir = TempDir::new().unwrap();
    let out = nbhd(
        dir.path(),
        &[
            "verify-nbhd",
            "--family",
            "S",
            "--n",
            "3",
            "--element",
            "3",
            "--universe",
            "R",
            "--json",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["verdict"], "fixed");
    let path = dir.path().join(report["trace"].as_str().unwrap());
    let trace = Trace::from_jsonl(&std::fs::read_to_string(path).unwrap()).unwrap();
    replay(&trace, &LemmaBase::shipped()).unwrap();
}

#[test]
fn refuted_claim_names_the_witness() {
    let dir = TempDir::new().unwrap();
    let out = nbhd(
        dir.path(),
        &[
            "verify-nbhd",
            "--family",
            "D",
            "--element",
            "12",
            "--universe",
            "Qsqrt5",
            "--json",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["verdict"], "moved");
    assert_eq!(report["witnessName"], "h");
    assert!(dir
        .path()
        .join(report["witness"].as_str().unwrap())
        .exists());
    // exact strings, never floats
    let pairs = report["assignments"].as_array().unwrap();
    assert!(pairs
        .iter()
        .flat_map(|p| p.as_array().unwrap())
        .all(Value::is_string));
    assert!(pairs.iter().any(|p| p[0] == "-36" && p[1] == "4*sqrt(5)"));
}

#[test]
fn unknown_without_hints_and_under_tight_caps() {
    let dir = TempDir::new().unwrap();
    let gen = nbhd(
        dir.path(),
        &[
            "gen",
            "--family",
            "B",
            "--n",
            "3",
            "--element",
            "3",
            "--out",
            "sets",
        ],
    );
    assert_eq!(gen.status.code(), Some(0));
    let out = nbhd(
        dir.path(),
        &[
            "verify-nbhd",
            "--set",
            "sets/B3_3.set.json",
            "--universe",
            "Q",
        ],
    );
    assert_eq!(out.status.code(), Some(2));

    let out = Command::new(env!("CARGO_BIN_EXE_nbhd"))
        .args([
            "verify-nbhd",
            "--family",
            "S",
            "--n",
            "3",
            "--element",
            "9",
            "--universe",
            "R",
        ])
        .current_dir(dir.path())
        .env("NBHD_CAPS", "size=3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_nbhd"))
        .args([
            "verify-nbhd",
            "--family",
            "S",
            "--n",
            "3",
            "--element",
            "9",
            "--universe",
            "R",
        ])
        .env("NBHD_CAPS", "size=0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn input_and_usage_errors() {
    let dir = TempDir::new().unwrap();
    let cases: &[&[&str]] = &[
        &["frobnicate"],
        &["verify-nbhd", "--universe", "R"],
        &[
            "verify-nbhd",
            "--family",
            "S",
            "--n",
            "2",
            "--element",
            "3",
            "--universe",
            "R",
        ],
        &[
            "verify-nbhd",
            "--family",
            "J",
            "--n",
            "8",
            "--universe",
            "R",
        ],
        &[
            "verify-nbhd",
            "--family",
            "S",
            "--n",
            "3",
            "--element",
            "3",
            "--universe",
            "Qsqrt4",
        ],
        &[
            "verify-nbhd",
            "--family",
            "S",
            "--n",
            "3",
            "--element",
            "3 +",
            "--universe",
            "R",
        ],
        &[
            "verify-nbhd",
            "--family",
            "S",
            "--n",
            "3",
            "--element",
            "5",
            "--universe",
            "R",
        ],
    ];
    for args in cases {
        let code = nbhd(dir.path(), args).status.code().unwrap();
        assert!(code >= 3, "{args:?} gave {code}");
    }
    std::fs::write(
        dir.path().join("dup.json"),
        r#"{"elements": ["1", "2/2"], "distinguished": "1"}"#,
    )
    .unwrap();
    let out = nbhd(
        dir.path(),
        &["verify-nbhd", "--set", "dup.json", "--universe", "Q"],
    );
    assert!(out.status.code().unwrap() >= 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("duplicate"));
}

#[test]
fn map_checks() {
    let dir = TempDir::new().unwrap();
    let gen = nbhd(
        dir.path(),
        &[
            "gen",
            "--family",
            "S",
            "--n",
            "4",
            "--element",
            "3",
            "--witness",
            "gamma",
        ],
    );
    assert_eq!(gen.status.code(), Some(0));
    let ok = nbhd(
        dir.path(),
        &[
            "verify-map",
            "--set",
            "S4_3.set.json",
            "--map",
            "S4.gamma.map.json",
            "--json",
        ],
    );
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["movesElement"], true);
    std::fs::write(
        dir.path().join("bad.json"),
        r#"{"codomain": "Z", "assignments": [["1","1"],["10","10"],["20","20"],["30","30"],["3","3"],["9","9"],["27","27"],["81","80"]]}"#,
    )
    .unwrap();
    let bad = nbhd(
        dir.path(),
        &[
            "verify-map",
            "--set",
            "S4_3.set.json",
            "--map",
            "bad.json",
            "--json",
        ],
    );
    assert_eq!(bad.status.code(), Some(1));
    assert!(json(&bad)["violation"].as_str().unwrap().contains("81"));
}

#[test]
fn search_exit_codes() {
    let dir = TempDir::new().unwrap();
    let found = nbhd(
        dir.path(),
        &[
            "search",
            "--family",
            "S",
            "--n",
            "3",
            "--element",
            "3",
            "--codomain",
            "Zi",
            "--height",
            "4",
        ],
    );
    assert_eq!(found.status.code(), Some(1));
    let none = nbhd(
        dir.path(),
        &[
            "search",
            "--family",
            "S",
            "--n",
            "3",
            "--element",
            "3",
            "--codomain",
            "Z",
            "--height",
            "10",
        ],
    );
    assert_eq!(none.status.code(), Some(2));
}

#[test]
fn lemma_check_passes_and_catches_a_bad_lemma() {
    let dir = TempDir::new().unwrap();
    assert_eq!(nbhd(dir.path(), &["lemma-check"]).status.code(), Some(0));
    let bad = r#"[{"id": "X", "equation": "x^2 + y^2 = 25", "ring": "Z",
        "solutions": [{"x": "3", "y": "4"}], "citation": "none",
        "sanityBound": 5, "fullyEnumerable": true, "check": "box-enumeration"}]"#;
    std::fs::write(dir.path().join("bad.json"), bad).unwrap();
    let out = nbhd(
        dir.path(),
        &["lemma-check", "--lemmas", "bad.json", "--json"],
    );
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["rows"][0]["ok"], false);
}

#[test]
fn corpus_runs_every_claim_once_in_manifest_order() {
    let dir = TempDir::new().unwrap();
    let out = nbhd(dir.path(), &["corpus", "--all", "--json"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let report = json(&out);
    let rows = report["rows"].as_array().unwrap();
    let ids: Vec<&str> = rows.iter().map(|r| r["id"].as_str().unwrap()).collect();
    let want: Vec<String> = corpus().into_iter().map(|c| c.id).collect();
    assert_eq!(ids, want);
    assert!(rows.iter().all(|r| r["ok"] == true));
    assert_eq!(report["failed"], "0");
}

#[test]
fn corpus_report_is_deterministic_and_fails_on_mismatch() {
    let dir = TempDir::new().unwrap();
    let a = nbhd(
        dir.path(),
        &["corpus", "--filter", "(3)/", "--json", "--threads", "4"],
    );
    let b = nbhd(
        dir.path(),
        &["corpus", "--filter", "(3)/", "--json", "--threads", "1"],
    );
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let mut claims = corpus();
    claims.truncate(3);
    claims[0].expected = arith_nbhd::constructions::Expected::Moved;
    std::fs::write(
        dir.path().join("m.json"),
        serde_json::to_string(&claims).unwrap(),
    )
    .unwrap();
    let out = nbhd(dir.path(), &["corpus", "--all", "--manifest", "m.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
    assert_eq!(nbhd(dir.path(), &["corpus"]).status.code(), Some(3));
}

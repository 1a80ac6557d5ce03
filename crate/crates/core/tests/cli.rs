use std::path::Path;

use hypign::cli::run;
use hypign::fixtures;
use hypign::model::{load_path, AsModel};
use hypign::semantics::{eval, System};
use hypign::syntax::parse;
use tempfile::TempDir;

fn hypign(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hypign").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn eval_on_the_worked_models() {
    let dir = TempDir::new().unwrap();
    let hiw = write(&dir, "hiw.json", fixtures::WILLIAM3_HIW);
    let hdi = write(&dir, "hdi.json", fixtures::WILLIAM3_HDI);

    let (code, out, _) = hypign(&["eval", &hiw, "w", "Iw (p & (q | ~q))", "--system", "hiw"]);
    assert_eq!((code, out.trim()), (0, "true"));
    let (code, out, _) = hypign(&["eval", &hdi, "w", "Id p", "--system", "HDI"]);
    assert_eq!((code, out.trim()), (0, "true"));

    let (code, out, _) = hypign(&["eval", &hiw, "w", "~Iw p", "--system", "hiw", "--trace"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "true");
    assert!(
        lines
            .iter()
            .any(|l| l.contains("false") && l.ends_with("Iw p")),
        "{out}"
    );
}

#[test]
fn eval_input_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let hiw = write(&dir, "hiw.json", fixtures::WILLIAM3_HIW);
    let broken = write(&dir, "broken.json", "{\"worlds\": [\"w\"]");

    let (code, _, err) = hypign(&["eval", &hiw, "z", "p", "--system", "hiw"]);
    assert_eq!(code, 2);
    assert!(err.contains("`z`"), "{err}");
    assert_eq!(hypign(&["eval", &broken, "w", "p", "--system", "iw"]).0, 2);
    let missing = dir.path().join("nope.json");
    assert_eq!(
        hypign(&[
            "eval",
            missing.to_str().unwrap(),
            "w",
            "p",
            "--system",
            "iw"
        ])
        .0,
        2
    );
    assert_eq!(hypign(&["eval", &hiw, "w", "p &", "--system", "hiw"]).0, 2);
    // Iu is not part of the HIW language.
    assert_eq!(hypign(&["eval", &hiw, "w", "Iu p", "--system", "hiw"]).0, 2);
    // HIW needs topics; a plain Kripke model is rejected.
    let plain = write(
        &dir,
        "plain.json",
        r#"{"worlds": ["w"], "relation": [], "valuation": {"p": ["w"]}}"#,
    );
    assert_eq!(
        hypign(&["eval", &plain, "w", "~Iw p", "--system", "hiw"]).0,
        2
    );
    assert_eq!(
        hypign(&["eval", &plain, "w", "~Iw p", "--system", "iw"]).0,
        0
    );
}

#[test]
fn valid_reports_and_writes_witnesses() {
    let (code, out, _) = hypign(&["valid", "Iw p <-> Iw ~p", "--system", "hiw"]);
    assert_eq!(code, 0);
    assert!(out.contains("VALID_UP_TO_BOUND"), "{out}");
    assert_eq!(hypign(&["valid", "p -> p", "--system", "iw"]).0, 0);

    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("witness.json");
    let (code, out, _) = hypign(&[
        "valid",
        "~Id (p | ~p)",
        "--system",
        "di",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 1, "countermodel against the default expectation");
    assert!(out.contains("COUNTERMODEL"));
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    let world = report["world"].as_str().unwrap();
    let model = load_path(Path::new(&out_path)).unwrap();
    assert_eq!(model.kripke().world_count(), 1);
    let f = parse("~Id (p | ~p)", System::DI.language()).unwrap();
    assert!(!eval(&model, world, &f, System::DI).unwrap());

    let (code, _, _) = hypign(&[
        "valid",
        "~Id (p | ~p)",
        "--system",
        "di",
        "--expect",
        "countermodel",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        hypign(&["valid", "p", "--system", "iw", "--max-worlds", "0"]).0,
        2
    );
}

#[test]
fn prove_bundled_and_broken_scripts() {
    let (code, out, _) = hypign(&["prove", "--bundled", "gen_a6_iw"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("OK HIW: 14 lines"), "{out}");

    let b = fixtures::bundled("gen_a7_iu").unwrap();
    let mut proof = b.proof();
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "good.json", &proof.to_json());
    let (code, out, _) = hypign(&["prove", &good, "--system", "hiu", "--goal", b.goal]);
    assert_eq!(code, 0, "{out}");

    proof.lines.remove(9);
    let bad = write(&dir, "bad.json", &proof.to_json());
    let (code, out, _) = hypign(&["prove", &bad, "--system", "hiu"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("FAILED HIU: line"), "{out}");

    let (code, out, _) = hypign(&["prove", &good, "--system", "hiw"]);
    assert_eq!(code, 1, "{out}");
    assert_eq!(hypign(&["prove", "--bundled", "nonexistent"]).0, 2);
    let junk = write(&dir, "junk.json", "[{\"i\": 1}]");
    assert_eq!(hypign(&["prove", &junk, "--system", "hiu"]).0, 2);
}

#[test]
fn parse_list_and_usage() {
    let (code, out, _) = hypign(&["parse", "Iw p -> q & r", "--system", "hiw"]);
    assert_eq!((code, out.trim()), (0, "(Iw p -> (q & r))"));
    let (code, _, err) = hypign(&["parse", "p -> ", "--system", "iw"]);
    assert_eq!(code, 2);
    assert!(err.contains("error"), "{err}");

    let (code, out, _) = hypign(&["list", "--system", "hiw"]);
    assert_eq!(code, 0);
    for name in ["T_box", "Iw_iff", "A7_Iw", "NEC_Iw", "RE_Iw"] {
        assert!(out.contains(name), "{name} missing from {out}");
    }

    assert_eq!(hypign(&["eval", "--system", "martian"]).0, 2);
    assert_eq!(hypign(&["frobnicate"]).0, 2);
    let (code, out, _) = hypign(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("repro"));
}

#[test]
fn fuzz_is_deterministic_per_seed() {
    let args = ["fuzz", "--system", "hiu", "--trials", "50", "--seed", "9"];
    let (code, first, _) = hypign(&args);
    assert_eq!(code, 0, "{first}");
    assert_eq!(hypign(&args).1, first);
    let (code, out, _) = hypign(&["fuzz", "--system", "iw", "--trials", "300", "--mutants"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("mutants killed"));
}

#[test]
fn repro_passes_and_notices_drift() {
    let (code, out, _) = hypign(&["repro", "--trials", "300"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.trim_end().ends_with("0 failed"), "{out}");

    let (code, out, _) = hypign(&["repro", "--trials", "300", "--variant", "id-includes-self"]);
    assert_eq!(code, 1);
    let failed: Vec<&str> = out.lines().filter(|l| l.contains("FAIL ")).collect();
    assert!(
        failed.iter().any(|l| l.starts_with("fixture   self-loop")),
        "{out}"
    );

    let (code, out, _) = hypign(&["repro", "--trials", "300", "--variant", "relational-box"]);
    assert_eq!(code, 1);
    assert!(
        out.lines()
            .any(|l| l.contains("HIW T_box") && l.contains("FAIL")),
        "{out}"
    );
    assert!(
        out.lines()
            .any(|l| l.contains("HIW A4_Iw") && l.contains("PASS")),
        "{out}"
    );
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bialg_core::bialgebra::builtin;
use bialg_core::cli::{
    parse_bialgebra_str, render_report, run, Format, JobSpec, Source, SCHEMA_VERSION,
};
use bialg_core::Error;
use serde_json::Value;

fn bialg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bialg")).args(args).output().expect("binary runs")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn every_command_succeeds_on_builtins() {
    for args in [
        vec!["validate", "--builtin", "su2"],
        vec!["validate", "--builtin", "su2+t1"],
        vec!["double", "--builtin", "su2+t1"],
        vec!["double", "--builtin", "gl:3"],
        vec!["quantize", "--builtin", "su2", "--order", "3"],
        vec!["recognize", "--builtin", "su2", "--order", "4"],
        vec!["primitivize", "--builtin", "su2", "--order", "3", "--seed", "7"],
    ] {
        let out = bialg(&args);
        assert_eq!(code(&out), 0, "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.contains("status: pass"), "{args:?}");
        assert!(!text.contains("FAIL"), "{args:?}");
    }
}

#[test]
fn invalid_bialgebra_exits_with_one() {
    let path = data("su2_bad_lowering.json");
    let out = bialg(&["validate", "--input", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("status: fail"));
    assert!(text.contains("check cocycle: FAIL"));
    assert!(text.contains("check jacobi: pass"));

    // quantize reports the failed checks instead of solving
    let out = bialg(&["quantize", "--input", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("check cocycle: FAIL"));
    assert!(!text.contains("coproducts:"));
}

#[test]
fn user_errors_exit_with_two() {
    let missing = data("does_not_exist.json");
    for args in [
        vec!["validate", "--builtin", "so3"],
        vec!["double", "--builtin", "gl:1"],
        vec!["quantize", "--builtin", "su2", "--order", "3", "--degree", "3"],
        vec!["validate", "--input", missing.to_str().unwrap()],
    ] {
        let out = bialg(&args);
        assert_eq!(code(&out), 2, "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "), "{args:?}");
    }
    // clap usage errors
    assert_eq!(code(&bialg(&["validate"])), 2);
    assert_eq!(code(&bialg(&["frobnicate", "--builtin", "su2"])), 2);
}

#[test]
fn reports_are_deterministic() {
    for args in [
        vec!["quantize", "--builtin", "su2", "--order", "3", "--format", "json"],
        vec!["primitivize", "--builtin", "su2", "--order", "3", "--seed", "11"],
        vec!["double", "--builtin", "gl:2", "--format", "json"],
    ] {
        let a = bialg(&args);
        let b = bialg(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn quantize_text_matches_the_golden_file() {
    let out = bialg(&["quantize", "--builtin", "su2", "--order", "2"]);
    assert_eq!(code(&out), 0);
    let golden = std::fs::read_to_string(data("quantize_su2_order2.txt")).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden);
}

#[test]
fn out_flag_writes_the_report() {
    let dir = std::env::temp_dir().join(format!("bialg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.txt");
    let out = bialg(&["quantize", "--builtin", "su2", "--order", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let golden = std::fs::read_to_string(data("quantize_su2_order2.txt")).unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), golden);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn json_envelope_has_the_documented_fields() {
    let out = bialg(&["quantize", "--builtin", "su2", "--order", "2", "--format", "json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema_version"], SCHEMA_VERSION);
    assert_eq!(v["engine"]["name"], "bialg");
    assert_eq!(v["status"], "pass");
    assert_eq!(v["job"]["command"], "quantize");
    assert_eq!(v["job"]["order"], 2);
    assert_eq!(v["job"]["degree"], 4);
    assert_eq!(v["job"]["source"]["kind"], "builtin");
    assert_eq!(v["job"]["source"]["value"], "su2");
    assert!(v.get("timing_ms").is_none());
    assert!(v["result"].is_object());

    let timed = bialg(&["validate", "--builtin", "su2", "--format", "json", "--timing"]);
    let v: Value = serde_json::from_slice(&timed.stdout).unwrap();
    assert!(v["timing_ms"].is_number());
}

#[test]
fn job_validation() {
    let job = JobSpec::builtin(bialg_core::cli::Command::Quantize, "su2").with_order(3);
    assert_eq!(job.degree, 5);
    job.validate().unwrap();
    assert!(matches!(job.clone().with_degree(3).validate(), Err(Error::InvalidJob(_))));
    let unknown = JobSpec::builtin(bialg_core::cli::Command::Validate, "sl3");
    assert!(matches!(unknown.validate(), Err(Error::UnknownBuiltin(_))));
    assert_eq!(job.source, Source::Builtin("su2".into()));
}

#[test]
fn library_rendering_matches_the_binary() {
    let job = JobSpec::builtin(bialg_core::cli::Command::Quantize, "su2").with_order(2);
    let report = run(&job).unwrap();
    assert!(report.passed);
    let golden = std::fs::read_to_string(data("quantize_su2_order2.txt")).unwrap();
    assert_eq!(String::from_utf8(render_report(&report, Format::Text)).unwrap(), golden);
}

/// The documented input example writes the wedges as `J+,J3`, which reads
/// as `½ J+∧J3`: the opposite sign of the built-in cobracket, and still a
/// valid bialgebra.
#[test]
fn documented_example_parses() {
    let doc = r#"{"generators": ["J3","J+","J-"], "brackets": {"J3,J+": {"J+": "1"}, "J3,J-": {"J-": "-1"}, "J+,J-": {"J3": "1"}}, "cocommutator": {"J+": {"J+,J3": "1/2"}, "J-": {"J-,J3": "1/2"}}}"#;
    let b = parse_bialgebra_str(doc).unwrap();
    let su2 = builtin::su2();
    assert_eq!(b.brackets(), su2.brackets());
    assert_eq!(b.cocommutators(), &su2.cocommutators().scaled(&bialg_core::AlgebraicScalar::from_int(-1)));
    b.validate().unwrap();

    let file = std::fs::read_to_string(data("su2.json")).unwrap();
    assert_eq!(parse_bialgebra_str(&file).unwrap(), su2);
}

#[test]
fn parser_errors() {
    let empty = r#"{"generators": [], "brackets": {}, "cocommutator": {}}"#;
    assert!(matches!(parse_bialgebra_str(empty), Err(Error::Parse { .. })));

    let unknown = r#"{"generators": ["A","B"], "brackets": {"A,Jx": {"A": "1"}}, "cocommutator": {}}"#;
    assert!(matches!(parse_bialgebra_str(unknown), Err(Error::UnknownGenerator(_))));

    let dup = r#"{"generators": ["A","B"], "brackets": {"A,B": {"A": "1"}, "B,A": {"A": "1"}}, "cocommutator": {}}"#;
    assert!(matches!(parse_bialgebra_str(dup), Err(Error::DuplicateEntry(_))));

    let same_key = r#"{"generators": ["A","B"], "brackets": {"A,B": {"A": "1"}, "A,B": {"B": "1"}}, "cocommutator": {}}"#;
    assert!(matches!(parse_bialgebra_str(same_key), Err(Error::DuplicateEntry(_))));

    let self_pair = r#"{"generators": ["A","B"], "brackets": {"A,A": {"A": "1"}}, "cocommutator": {}}"#;
    assert!(matches!(parse_bialgebra_str(self_pair), Err(Error::Parse { .. })));

    let bad_scalar = r#"{"generators": ["A","B"], "brackets": {"A,B": {"A": "1/0"}}, "cocommutator": {}}"#;
    assert!(matches!(parse_bialgebra_str(bad_scalar), Err(Error::ScalarParse { .. })));

    let extra = r#"{"generators": ["A"], "brackets": {}, "cocommutator": {}, "colour": 1}"#;
    assert!(matches!(parse_bialgebra_str(extra), Err(Error::Parse { .. })));

    let broken = "{\"generators\": [\"A\"],\n  \"brackets\": {";
    match parse_bialgebra_str(broken) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gluing::finset::{random_spec, RandomSpecParams};
use gluing::report::{RepairOutcome, Report, Status};
use gluing::specfile::{Spec, SpecFile, SpecOptions};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gluing"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out: Output = bin().args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn run_json(args: &[&str]) -> (i32, Report) {
    let mut v = args.to_vec();
    v.push("--json");
    let (code, out, _) = run(&v);
    let report: Report = serde_json::from_str(&out).expect("report parses");
    (code, report)
}

fn check_golden(name: &str, actual: &str) {
    let path = golden(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing {}; rerun with UPDATE_GOLDEN=1", path.display()));
    assert_eq!(actual, expected, "{} differs", path.display());
}

#[test]
fn example3_passes() {
    let (code, out, _) = run(&["check", "--fixture", "example3"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("multi-pullback: dim 6"));
    assert!(out.contains("status: pass (exit 0)"));
}

#[test]
fn example2_reports_cocycle_and_extension_failure() {
    let (code, out, _) = run(&["check", "--fixture", "example2"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("cocycle condition: FAIL"));
    assert!(out.contains("cannot extend {2,3} by 1"));
}

#[test]
fn example1_flags_the_non_surjective_projections() {
    let (code, report) = run_json(&["check", "--fixture", "example1"]);
    assert_eq!(code, 1);
    assert_eq!(report.pullback_dim, Some(5));
    let projections = report.projections.unwrap();
    let short: Vec<&str> = projections
        .iter()
        .filter(|p| !p.surjective)
        .map(|p| p.piece.as_str())
        .collect();
    assert_eq!(short, vec!["2", "3"]);
}

#[test]
fn json_report_round_trips() {
    let (_, out, _) = run(&["check", "--fixture", "example2", "--json"]);
    let report: Report = serde_json::from_str(&out).unwrap();
    assert_eq!(report.status, Status::CheckFailed);
    assert_eq!(report.exit_code, 1);
    assert_eq!(report.to_json().trim_end(), out.trim_end());
}

#[test]
fn example2_json_matches_golden() {
    let (_, out, _) = run(&["check", "--fixture", "example2", "--json"]);
    check_golden("example2_check.json", &out);
}

#[test]
fn random_spec_file_matches_golden() {
    let spec = random_spec(1, RandomSpecParams::default());
    let file = SpecFile::from_gluing(&spec, SpecOptions::default());
    let text = file.to_json();
    check_golden("random_seed1.json", &text);
    let back = SpecFile::from_json(&text).unwrap().to_gluing().unwrap();
    assert_eq!(back, spec);
}

#[test]
fn non_distributive_family_is_a_hypothesis_failure() {
    let path = data("three_lines.json");
    let (code, out, _) = run(&["check", path.to_str().unwrap()]);
    assert_eq!(code, 3, "{out}");
    assert!(out.contains("distributivity: FAIL"));
    assert!(out.contains("equivalence check skipped"));
}

#[test]
fn malformed_rational_names_the_field() {
    let (code, out, _) = run(&["check", data("bad_rational.json").to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.contains("maps[0].matrix[0][0]"), "{out}");
    assert!(out.contains("line 9"), "{out}");
}

#[test]
fn unknown_fields_and_missing_files_are_invalid_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("extra.json");
    std::fs::write(&path, r#"{"kind": "finite-gluing", "spaces": [], "colour": 1}"#).unwrap();
    let (code, out, _) = run(&["check", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.contains("colour"), "{out}");

    let (code, _, _) = run(&["check", dir.path().join("absent.json").to_str().unwrap()]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["check", "--fixture", "no-such-fixture"]);
    assert_eq!(code, 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&[]).0, 2);
    assert_eq!(run(&["check"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn glue_tstar_counts_classes_and_finds_the_fold() {
    let (code, out, _) = run(&["glue", "--fixture", "tstar"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("glued classes: 5"));
    assert!(out.contains("piece {2}: NOT embedded"));
}

#[test]
fn glue_with_duality_on_a_file() {
    let (code, report) = run_json(&["glue", data("circle.json").to_str().unwrap(), "--duality"]);
    assert_eq!(code, 1);
    let glue = report.glue.unwrap();
    assert_eq!(glue.class_count, 6);
    assert!(report.duality.unwrap().consistent());

    let (code, out, _) = run(&["glue", "--fixture", "tcirc-c", "--duality"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("duality: pass"));
}

#[test]
fn glue_disjoint_pieces() {
    let (code, report) = run_json(&["glue", data("disjoint.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(report.glue.unwrap().class_count, 6);
}

#[test]
fn glue_rejects_an_algebra_family() {
    let (code, _, _) = run(&["glue", "--fixture", "example3"]);
    assert_eq!(code, 2);
}

#[test]
fn chain_length_flag_changes_the_fixture() {
    let (code, report) = run_json(&["glue", "--fixture", "tcirc-c", "--chain-length", "5"]);
    assert_eq!(code, 0);
    assert_eq!(report.glue.unwrap().class_count, 12);
    assert_eq!(run(&["glue", "--fixture", "tcirc-c", "--chain-length", "1"]).0, 2);
}

#[test]
fn repair_example2_writes_a_passing_family() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("repaired.json");
    let (code, report) =
        run_json(&["repair", "--fixture", "example2", "--out", out_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let repair = report.repair.unwrap();
    assert_eq!(repair.outcome, RepairOutcome::Repaired);
    assert_eq!(repair.comparison_bijective, Some(true));
    let grown: Vec<_> = repair.overlaps.iter().filter(|o| o.after > o.before).collect();
    assert_eq!(grown.len(), 1);
    assert_eq!(grown[0].pair, ["2".to_string(), "3".to_string()]);
    assert_eq!((grown[0].before, grown[0].after), (1, 2));

    let written = SpecFile::read(&out_path).unwrap();
    assert!(matches!(written.to_spec().unwrap(), Spec::Family(_)));
    let (code, out, _) = run(&["check", out_path.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn repair_leaves_example3_alone() {
    let (code, report) = run_json(&["repair", "--fixture", "example3"]);
    assert_eq!(code, 0);
    let repair = report.repair.unwrap();
    assert!(repair.overlaps.iter().all(|o| o.before == o.after));
}

#[test]
fn repair_refuses_non_surjective_input() {
    let (code, out, _) = run(&["repair", "--fixture", "example1"]);
    assert_eq!(code, 3);
    assert!(out.contains("REFUSED"));
    assert!(out.contains("not surjective"));
}

#[test]
fn check_dualizes_finite_gluing_input() {
    let (code, report) = run_json(&["check", "--fixture", "tcirc-a"]);
    assert_eq!(code, 1);
    assert_eq!(report.pullback_dim, Some(6));
    assert!(!report.notices.is_empty());
}

use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use gluing_ffi::*;

fn last_error() -> String {
    let p = gl_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn load_fixture(name: &str) -> *mut GlFamily {
    let name = CString::new(name).unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { gl_family_from_fixture(name.as_ptr(), 3, &mut f) }, GlStatus::Ok);
    assert!(!f.is_null());
    f
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { gl_string_free(p) };
    s
}

#[test]
fn fixture_dimensions_and_verdicts() {
    for (name, dim, cocycle) in [("example2", 6, false), ("example3", 6, true), ("tcirc-c", 6, true)] {
        let f = load_fixture(name);
        let mut d = 0usize;
        let mut holds = !cocycle;
        unsafe {
            assert_eq!(gl_family_pullback_dim(f, &mut d), GlStatus::Ok);
            assert_eq!(gl_family_check_cocycle(f, &mut holds), GlStatus::Ok);
            gl_family_free(f);
        }
        assert_eq!((d, holds), (dim, cocycle), "{name}");
    }
}

#[test]
fn check_returns_report_status() {
    for (name, status) in [
        ("example1", GlStatus::CheckFailed),
        ("example2", GlStatus::CheckFailed),
        ("example3", GlStatus::Ok),
    ] {
        let f = load_fixture(name);
        let mut out = ptr::null_mut();
        assert_eq!(unsafe { gl_family_check(f, &mut out) }, status, "{name}");
        let json: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(json["exit_code"], status as i32);
        unsafe { gl_family_free(f) };
    }
}

#[test]
fn hypothesis_failures() {
    let f = load_fixture("example1");
    let mut holds = true;
    unsafe {
        assert_eq!(gl_family_check_cocycle(f, &mut holds), GlStatus::Ok);
        assert!(!holds);
        let mut r = ptr::null_mut();
        assert_eq!(gl_family_repair(f, &mut r), GlStatus::HypothesisFailed);
        assert!(last_error().contains("not surjective"));
        assert!(r.is_null());
        gl_family_free(f);
    }

    let diagonal = CString::new(
        r#"{"kind": "algebra-family",
            "algebras": [
              {"label": "Q", "dim": 1, "structure_constants": [[["1"]]], "unit": ["1"]},
              {"label": "Q2", "dim": 2,
               "structure_constants": [[["1", "0"], ["0", "0"]], [["0", "0"], ["0", "1"]]],
               "unit": ["1", "1"]}],
            "pieces": [{"label": "1", "algebra": "Q"}, {"label": "2", "algebra": "Q2"}],
            "overlaps": [{"pair": ["1", "2"], "algebra": "Q2"}],
            "maps": [{"from": "1", "to": "2", "matrix": [["1"], ["1"]]},
                     {"from": "2", "to": "1", "matrix": [["1", "0"], ["0", "1"]]}]}"#,
    )
    .unwrap();
    let mut f = ptr::null_mut();
    unsafe {
        assert_eq!(gl_family_from_json(diagonal.as_ptr(), &mut f), GlStatus::Ok);
        assert_eq!(gl_family_check_cocycle(f, &mut holds), GlStatus::HypothesisFailed);
        assert!(last_error().contains("surjective"));
        let mut out = ptr::null_mut();
        assert_eq!(gl_family_check(f, &mut out), GlStatus::HypothesisFailed);
        take_string(out);
        gl_family_free(f);
    }
}

#[test]
fn repair_then_round_trip_through_json() {
    let f = load_fixture("example2");
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(gl_family_repair(f, &mut r), GlStatus::Ok);
        let mut holds = false;
        assert_eq!(gl_family_check_cocycle(r, &mut holds), GlStatus::Ok);
        assert!(holds);

        let mut s = ptr::null_mut();
        assert_eq!(gl_family_to_json(r, &mut s), GlStatus::Ok);
        let text = CString::new(take_string(s)).unwrap();
        let mut back = ptr::null_mut();
        assert_eq!(gl_family_from_json(text.as_ptr(), &mut back), GlStatus::Ok);
        let mut d = 0usize;
        assert_eq!(gl_family_pullback_dim(back, &mut d), GlStatus::Ok);
        assert_eq!(d, 6);
        for h in [f, r, back] {
            gl_family_free(h);
        }
    }
}

#[test]
fn finite_gluing_json_is_dualized() {
    let text = CString::new(
        r#"{"kind": "finite-gluing",
            "spaces": [{"label": "a", "points": ["x", "y"]}, {"label": "b", "points": ["z"]}],
            "identifications": [{"pair": ["a", "b"], "points": [["y", "z"]]}]}"#,
    )
    .unwrap();
    let mut f = ptr::null_mut();
    unsafe {
        assert_eq!(gl_family_from_json(text.as_ptr(), &mut f), GlStatus::Ok);
        let (mut n, mut d) = (0usize, 0usize);
        assert_eq!(gl_family_piece_count(f, &mut n), GlStatus::Ok);
        assert_eq!(gl_family_pullback_dim(f, &mut d), GlStatus::Ok);
        assert_eq!((n, d), (2, 2));
        gl_family_free(f);
    }
}

#[test]
fn errors_set_codes_and_messages() {
    let mut f = ptr::null_mut();
    unsafe {
        let bad = CString::new(r#"{"kind": "algebra-family", "algebras": [{"label": "A", "dim": 1, "structure_constants": [[["1/0"]]], "unit": ["1"]}]}"#).unwrap();
        assert_eq!(gl_family_from_json(bad.as_ptr(), &mut f), GlStatus::InvalidInput);
        assert!(f.is_null());
        assert!(last_error().contains("structure_constants"), "{}", last_error());

        let name = CString::new("missing").unwrap();
        assert_eq!(gl_family_from_fixture(name.as_ptr(), 3, &mut f), GlStatus::InvalidInput);
        let name = CString::new("tstar").unwrap();
        assert_eq!(gl_family_from_fixture(name.as_ptr(), 1, &mut f), GlStatus::InvalidInput);

        assert_eq!(gl_family_from_json(ptr::null(), &mut f), GlStatus::NullPointer);
        assert_eq!(gl_family_from_fixture(name.as_ptr(), 3, ptr::null_mut()), GlStatus::NullPointer);
        let mut d = 0usize;
        assert_eq!(gl_family_pullback_dim(ptr::null(), &mut d), GlStatus::NullPointer);
        assert!(last_error().contains("null"));

        let ok = load_fixture("tstar");
        assert!(gl_last_error_message().is_null());
        gl_family_free(ok);
        gl_family_free(ptr::null_mut());
        gl_string_free(ptr::null_mut());
    }
}

fn build_shared_library() -> PathBuf {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let target = manifest.join("../../target/ffi-smoke");
    let cargo = std::env::var("CARGO").unwrap_or_else(|_| "cargo".into());
    let status = Command::new(cargo)
        .args(["build", "--quiet", "-p", "gluing-ffi", "--lib", "--target-dir"])
        .arg(&target)
        .current_dir(manifest)
        .status()
        .expect("cargo runs");
    assert!(status.success());
    target.join("debug")
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/gluing.h")).unwrap();
    for name in [
        "typedef struct GlFamily GlFamily",
        "GL_STATUS_OK = 0",
        "GL_STATUS_NULL_POINTER",
        "gl_family_from_json",
        "gl_family_from_fixture",
        "gl_family_check_cocycle",
        "gl_family_repair",
        "gl_string_free",
        "gl_last_error_message",
    ] {
        assert!(header.contains(name), "{name}");
    }
}

#[test]
fn c_program_links_against_the_shared_library() {
    let dir = build_shared_library();
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let work = tempfile::tempdir().unwrap();
    let exe = work.path().join("smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg("-L")
        .arg(&dir)
        .arg("-lgluing_ffi")
        .arg(format!("-Wl,-rpath,{}", dir.display()))
        .arg("-o")
        .arg(&exe)
        .status()
        .expect("cc runs");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        "dim=6 cocycle=0 check=1 repaired=1 bad=2 msg=1"
    );
}

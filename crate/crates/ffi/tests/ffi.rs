use std::ffi::{c_char, c_int, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use mvkit_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    mvkit_string_free(s);
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(mvkit_last_error()) }.to_str().unwrap().to_string()
}

fn algebra(expr: &str) -> *mut MvkitAlgebra {
    let mut a = ptr::null_mut();
    let status = unsafe { mvkit_algebra_new(ptr::null(), c(expr).as_ptr(), ptr::null(), &mut a) };
    assert_eq!(status, MvkitStatus::Ok, "{}", last_error());
    a
}

fn op(a: *const MvkitAlgebra, op: MvkitOp, x: &str, y: &str) -> Result<String, MvkitStatus> {
    let mut out = ptr::null_mut();
    match unsafe { mvkit_algebra_op(a, op, c(x).as_ptr(), c(y).as_ptr(), &mut out) } {
        MvkitStatus::Ok => Ok(unsafe { take(out) }),
        s => {
            assert!(out.is_null());
            Err(s)
        }
    }
}

#[test]
fn defaults_match_the_library() {
    let d = mvkit_config_default();
    let cfg = mvkit::Config::default();
    assert_eq!((d.samples, d.seed, d.cap, d.surrogate_depth), (cfg.samples as u64, cfg.seed, cfg.cap as u64, cfg.surrogate_depth as u64));
}

#[test]
fn chain_operations_round_trip_through_text() {
    let a = algebra("chain(5)");
    assert_eq!(op(a, MvkitOp::Plus, "1/4", "1/2").unwrap(), "3/4");
    assert_eq!(op(a, MvkitOp::Plus, "3/4", "1/2").unwrap(), "1");
    assert_eq!(op(a, MvkitOp::Times, "3/4", "1/2").unwrap(), "1/4");
    assert_eq!(op(a, MvkitOp::Join, "3/4", "1/2").unwrap(), "3/4");
    assert_eq!(op(a, MvkitOp::Meet, "3/4", "1/2").unwrap(), "1/2");
    assert_eq!(op(a, MvkitOp::Minus, "3/4", "1/2").unwrap(), "1/4");
    assert_eq!(op(a, MvkitOp::Distance, "1/4", "1").unwrap(), "3/4");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { mvkit_algebra_neg(a, c("1/4").as_ptr(), &mut out) }, MvkitStatus::Ok);
    assert_eq!(unsafe { take(out) }, "3/4");
    let mut n = 0;
    assert_eq!(unsafe { mvkit_algebra_size(a, 64, &mut n) }, MvkitStatus::Ok);
    assert_eq!(n, 5);
    unsafe { mvkit_algebra_free(a) };
}

#[test]
fn elements_outside_the_algebra_are_domain_errors() {
    let a = algebra("chain(3)");
    assert_eq!(op(a, MvkitOp::Plus, "1/3", "0"), Err(MvkitStatus::DomainError));
    assert!(!last_error().is_empty());
    assert_eq!(op(a, MvkitOp::Plus, "1/2", "(").unwrap_err(), MvkitStatus::SyntaxError);
    assert_eq!(op(a, MvkitOp::Plus, "1/2", "0").unwrap(), "1/2");
    assert_eq!(last_error(), "");
    unsafe { mvkit_algebra_free(a) };
}

#[test]
fn infinite_algebras_report_size_zero_and_sample_axioms() {
    let a = algebra("chang");
    let mut n = 7;
    assert_eq!(unsafe { mvkit_algebra_size(a, 64, &mut n) }, MvkitStatus::Ok);
    assert_eq!(n, 0);
    let cfg = MvkitConfig { samples: 100, ..mvkit_config_default() };
    let mut passed: c_int = -1;
    assert_eq!(unsafe { mvkit_algebra_check_axioms(a, &cfg, &mut passed) }, MvkitStatus::Ok);
    assert_eq!(passed, 1);
    assert_eq!(op(a, MvkitOp::Plus, "(0, 1)", "(0, 2)").unwrap(), "(0, 3)");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { mvkit_algebra_describe(a, &mut out) }, MvkitStatus::Ok);
    assert_eq!(unsafe { take(out) }, "gamma(lex(Z, Z), (1, 0))");
    unsafe { mvkit_algebra_free(a) };
}

#[test]
fn spec_names_resolve_and_run_produces_reports() {
    let text = c("algebra B = product(chain(2), chain(3))\nalgebra K = quasiconst(chang, 2)\n");
    let mut spec = ptr::null_mut();
    assert_eq!(unsafe { mvkit_spec_parse(text.as_ptr(), ptr::null(), &mut spec) }, MvkitStatus::Ok);

    let mut a = ptr::null_mut();
    assert_eq!(unsafe { mvkit_algebra_new(spec, c("B").as_ptr(), ptr::null(), &mut a) }, MvkitStatus::Ok);
    let mut n = 0;
    assert_eq!(unsafe { mvkit_algebra_size(a, 64, &mut n) }, MvkitStatus::Ok);
    assert_eq!(n, 6);
    let mut passed = 0;
    assert_eq!(unsafe { mvkit_algebra_check_axioms(a, ptr::null(), &mut passed) }, MvkitStatus::Ok);
    assert_eq!(passed, 1);
    unsafe { mvkit_algebra_free(a) };

    let run = |command: &str, args: &[&str]| -> (serde_json::Value, c_int) {
        let owned: Vec<CString> = args.iter().map(|s| c(s)).collect();
        let ptrs: Vec<*const c_char> = owned.iter().map(|s| s.as_ptr()).collect();
        let cfg = MvkitConfig { samples: 100, ..mvkit_config_default() };
        let (mut report, mut code) = (ptr::null_mut(), -1);
        let status = unsafe { mvkit_run(spec, c(command).as_ptr(), ptrs.as_ptr(), ptrs.len(), &cfg, &mut report, &mut code) };
        assert_eq!(status, MvkitStatus::Ok, "{}", last_error());
        (serde_json::from_str(&unsafe { take(report) }).unwrap(), code)
    };
    let (r, code) = run("ideals", &["B"]);
    assert_eq!((r["result"]["count"].as_u64(), r["result"]["maximal"].as_u64(), code), (Some(4), Some(2), 0));
    let (r, code) = run("qc-member", &["K", "[(0, 1), (1, 0)]"]);
    assert_eq!((r["status"].as_str(), code), (Some("verification-failed"), 1));
    let (r, code) = run("classify", &["Nope"]);
    assert_eq!((r["error"]["kind"].as_str(), code), (Some("UnknownName"), 2));
    unsafe { mvkit_spec_free(spec) };
}

#[test]
fn bad_inputs_map_to_status_codes() {
    let mut spec = ptr::null_mut();
    let status = unsafe { mvkit_spec_parse(c("algebra A = chain(").as_ptr(), ptr::null(), &mut spec) };
    assert_eq!(status, MvkitStatus::SyntaxError);
    assert!(spec.is_null());
    assert!(last_error().contains("syntax error"), "{}", last_error());

    let status = unsafe { mvkit_spec_parse(c("algebra A = product(B)").as_ptr(), ptr::null(), &mut spec) };
    assert_eq!(status, MvkitStatus::UnknownName);

    let status = unsafe { mvkit_spec_parse(ptr::null(), ptr::null(), &mut spec) };
    assert_eq!(status, MvkitStatus::NullArgument);
    let status = unsafe { mvkit_spec_parse(c("").as_ptr(), ptr::null(), ptr::null_mut()) };
    assert_eq!(status, MvkitStatus::NullArgument);

    let bad = [0xffu8, 0];
    let status = unsafe { mvkit_spec_parse(bad.as_ptr().cast(), ptr::null(), &mut spec) };
    assert_eq!(status, MvkitStatus::InvalidUtf8);

    let mut a = ptr::null_mut();
    let status = unsafe { mvkit_algebra_new(ptr::null(), c("gamma(Z, -1)").as_ptr(), ptr::null(), &mut a) };
    assert_eq!(status, MvkitStatus::DomainError);
    assert!(a.is_null());

    assert_eq!(op(ptr::null(), MvkitOp::Plus, "0", "0"), Err(MvkitStatus::NullArgument));
    let (mut report, mut code) = (ptr::null_mut(), 0);
    let status = unsafe { mvkit_run(ptr::null(), c("separate").as_ptr(), ptr::null(), 1, ptr::null(), &mut report, &mut code) };
    assert_eq!(status, MvkitStatus::NullArgument);
    unsafe {
        mvkit_string_free(ptr::null_mut());
        mvkit_spec_free(ptr::null_mut());
        mvkit_algebra_free(ptr::null_mut());
    }
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/mvkit.h")
}

#[test]
fn header_declares_every_entry_point() {
    let h = std::fs::read_to_string(header()).unwrap();
    let src = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let exported: Vec<&str> =
        src.lines().filter_map(|l| l.split("extern \"C\" fn ").nth(1)).map(|rest| rest.split('(').next().unwrap()).collect();
    assert!(exported.len() >= 12);
    for name in exported {
        assert!(h.contains(&format!("{name}(")), "{name} missing from the header");
    }
    for ty in ["MvkitStatus", "MvkitOp", "MvkitConfig", "MvkitSpec", "MvkitAlgebra"] {
        assert!(h.contains(&format!("typedef struct {ty}")) || h.contains(&format!("typedef enum {ty}")), "{ty}");
    }
}

const SMOKE: &str = r#"
#include <stdio.h>
#include <string.h>
#include "mvkit.h"

int main(void) {
    MvkitConfig cfg = mvkit_config_default();
    MvkitSpec *spec = NULL;
    if (mvkit_spec_parse("algebra B = product(chain(2), chain(3))", &cfg, &spec) != MVKIT_STATUS_OK) return 10;
    MvkitAlgebra *b = NULL;
    if (mvkit_algebra_new(spec, "B", &cfg, &b) != MVKIT_STATUS_OK) return 11;
    char *sum = NULL;
    if (mvkit_algebra_op(b, MVKIT_OP_PLUS, "(0, 1/2)", "(1, 1/2)", &sum) != MVKIT_STATUS_OK) return 12;
    int same = strcmp(sum, "(1, 1)") == 0;
    mvkit_string_free(sum);
    if (!same) return 13;
    const char *args[] = {"B"};
    char *report = NULL;
    int code = -1;
    if (mvkit_run(spec, "spec", args, 1, &cfg, &report, &code) != MVKIT_STATUS_OK || code != 0) return 14;
    printf("%s", report);
    mvkit_string_free(report);
    if (mvkit_algebra_new(NULL, "chain(", &cfg, &b) != MVKIT_STATUS_SYNTAX_ERROR) return 15;
    if (strlen(mvkit_last_error()) == 0) return 16;
    mvkit_spec_free(spec);
    return 0;
}
"#;

#[test]
fn c_program_links_against_the_static_library() {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(Path::parent).unwrap();
    let mut build = Command::new(env!("CARGO"));
    build.args(["build", "-q", "-p", "mvkit-ffi", "--lib"]).current_dir(env!("CARGO_MANIFEST_DIR"));
    if !cfg!(debug_assertions) {
        build.arg("--release");
    }
    assert!(build.status().unwrap().success());
    let lib = profile_dir.join("libmvkit_ffi.a");
    assert!(lib.exists(), "{} was not built", lib.display());
    let dir = std::env::temp_dir().join(format!("mvkit-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("smoke.c");
    std::fs::write(&src, SMOKE).unwrap();
    let bin = dir.join("smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let built = Command::new(cc)
        .arg("-std=c99")
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(built.status.success(), "{}", String::from_utf8_lossy(&built.stderr));
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["result"]["count"], 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

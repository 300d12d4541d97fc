//! Golden corpus: every `tests/golden/*.mv` file names its command on a
//! `# run:` line; the expected exit code and stdout live next to it in
//! `*.expected`. Set `MVKIT_BLESS=1` to rewrite the expectations.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

fn corpus() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut files: Vec<PathBuf> =
        fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).filter(|p| p.extension().is_some_and(|e| e == "mv")).collect();
    files.sort();
    files
}

fn run(spec: &Path) -> String {
    let text = fs::read_to_string(spec).unwrap();
    let line = text.lines().find_map(|l| l.strip_prefix("# run:")).unwrap_or_else(|| panic!("{} has no `# run:` line", spec.display()));
    let out = Command::new(env!("CARGO_BIN_EXE_mvkit")).args(line.split_whitespace()).arg("--file").arg(spec).output().unwrap();
    format!("exit: {}\n{}", out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn corpus_matches_expectations() {
    let files = corpus();
    assert!(files.len() >= 15, "only {} golden files", files.len());
    let bless = std::env::var_os("MVKIT_BLESS").is_some();
    let mut mismatched = Vec::new();
    for spec in &files {
        let got = run(spec);
        let expected = spec.with_extension("expected");
        if bless {
            fs::write(&expected, &got).unwrap();
        } else if fs::read_to_string(&expected).ok().as_deref() != Some(got.as_str()) {
            mismatched.push(spec.file_name().unwrap().to_string_lossy().into_owned());
        }
    }
    assert!(mismatched.is_empty(), "reports differ from the stored ones: {mismatched:?}");
}

#[test]
fn every_exit_code_is_exercised() {
    let mut codes: Vec<String> =
        corpus().iter().map(|p| fs::read_to_string(p.with_extension("expected")).unwrap().lines().next().unwrap().to_string()).collect();
    codes.sort();
    codes.dedup();
    assert_eq!(codes, ["exit: 0", "exit: 1", "exit: 2"]);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for spec in corpus().iter().take(6) {
        assert_eq!(run(spec), run(spec), "{}", spec.display());
    }
}

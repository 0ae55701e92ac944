use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn corpus(kind: &str) -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus").join(kind);
    let mut files: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    files
}

fn sample(name: &str) -> PathBuf {
    root().join("docs/samples").join(name)
}

fn dualseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dualseq")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = dualseq(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn decompose_an_interval() {
    let out = ok(&["decompose", path(&sample("interval.dsq")), "S01"]);
    assert_eq!(out, "[0,1] x1\ncertificate: OK\n");
}

#[test]
fn cohomology_of_an_interval() {
    let out = ok(&["cohomology", path(&sample("interval.dsq")), "S01"]);
    assert_eq!(out, "H^0: 1, H^1: 1\n");
}

#[test]
fn contractible_complex_minimizes_to_zero() {
    let out = ok(&["minimize", path(&sample("contractible.dsq")), "M"]);
    assert_eq!(out, "minimal model: 0; certificates: OK\n");
}

#[test]
fn every_sample_command_succeeds() {
    let i = sample("interval.dsq");
    let d = sample("diagram.dsq");
    let c = sample("contractible.dsq");
    let runs: Vec<Vec<&str>> = vec![
        vec!["decompose", path(&i), "V"],
        vec!["classify", path(&i), "P"],
        vec!["hom", path(&i), "S01", "S00", "--depth", "3"],
        vec!["cone", path(&i), "f"],
        vec!["cohomology", path(&c), "K"],
        vec!["phantom", path(&i), "h", "--depth", "3"],
        vec!["truncate", path(&i), "V", "-1"],
        vec!["derivation-check", path(&d), "D", "E"],
        vec!["inner-solve", path(&d), "D", "E"],
        vec!["show", path(&i), "g"],
    ];
    for args in runs {
        ok(&args);
        let mut json = vec!["--json"];
        json.extend(&args);
        let v: serde_json::Value = serde_json::from_str(&ok(&json)).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["command"], args[0]);
    }
}

#[test]
fn derivation_verdicts() {
    let d = sample("diagram.dsq");
    assert_eq!(ok(&["inner-solve", path(&d), "D", "E"]), "Leibniz: OK\ninner: no\n");
    assert_eq!(
        ok(&["inner-solve", path(&d), "D", "Z"]),
        "Leibniz: OK\ninner: yes\n  theta_B = 0\n"
    );
    let v = root().join("crates/dualseq/tests/corpus/valid/violated.dsq");
    assert_eq!(ok(&["derivation-check", path(&v), "D", "E"]), "Leibniz: violated at relation 1\n");
}

#[test]
fn valid_documents_exit_zero() {
    for f in corpus("valid") {
        let out = dualseq(&["cohomology", path(&f), "V"]);
        if !out.status.success() {
            // Documents without a V still have to load.
            let err = String::from_utf8_lossy(&out.stderr);
            assert!(err.contains("no object named V"), "{f:?}: {err}");
        }
    }
    let t = root().join("crates/dualseq/tests/corpus/valid/tails.dsq");
    assert_eq!(ok(&["decompose", path(&t), "Z"]), "0\ncertificate: OK\n");
}

#[test]
fn invalid_documents_exit_one_with_a_position() {
    let files = corpus("invalid");
    assert!(files.len() >= 8);
    for f in files {
        let out = dualseq(&["classify", path(&f), "S"]);
        assert_eq!(out.status.code(), Some(1), "{f:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains("line "), "{f:?}: {err}");
    }
}

#[test]
fn exhausted_depth_exits_two() {
    for f in corpus("deep") {
        let out = dualseq(&["phantom", path(&f), "h", "--depth", "1"]);
        assert_eq!(out.status.code(), Some(2), "{f:?}");
        let out = dualseq(&["phantom", path(&f), "h", "--depth", "4"]);
        assert_eq!(out.status.code(), Some(0), "{f:?}");
    }
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(dualseq(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(dualseq(&["decompose"]).status.code(), Some(1));
    assert_eq!(dualseq(&["--help"]).status.code(), Some(0));
    let missing = dualseq(&["decompose", "/nonexistent/doc.dsq", "V"]);
    assert_eq!(missing.status.code(), Some(1));
    let i = sample("interval.dsq");
    assert_eq!(dualseq(&["minimize", path(&i), "S01"]).status.code(), Some(1));
}

#[test]
fn non_h_projective_phantom_query_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("i.dsq");
    std::fs::write(&f, "field 2\ninterval I = [0, inf]\nmorphism h : I -> I = id\n").unwrap();
    let out = dualseq(&["phantom", path(&f), "h"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("h-projective"));
}

#[test]
fn shown_objects_reparse() {
    let dir = tempfile::tempdir().unwrap();
    for (file, name) in [
        (sample("interval.dsq"), "V"),
        (root().join("crates/dualseq/tests/corpus/valid/tails.dsq"), "V"),
        (root().join("crates/dualseq/tests/corpus/valid/rational.dsq"), "V"),
        (root().join("crates/dualseq/tests/corpus/valid/rational.dsq"), "M"),
    ] {
        let src = std::fs::read_to_string(&file).unwrap();
        let field = src.lines().find(|l| l.starts_with("field")).unwrap();
        let shown = ok(&["show", path(&file), name]);
        let again = dir.path().join("again.dsq");
        std::fs::write(&again, format!("{field}\n{shown}")).unwrap();
        assert_eq!(ok(&["show", path(&again), name]), shown);
        assert_eq!(
            ok(&["--json", "show", path(&again), name]),
            ok(&["--json", "show", path(&file), name])
        );
    }
}

use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn symtens(args: &[&str], cache: Option<&Path>) -> (i32, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_symtens"));
    cmd.args(args).env_remove("SYMTENS_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.env("SYMTENS_CACHE_DIR", dir);
    }
    let out = cmd.output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap_or_else(|e| panic!("not JSON ({e}): {s}"))
}

#[test]
fn validate_projective_plane_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p2.json");
    std::fs::write(&path, r#"{"dim": 2, "rays": [[1,0],[0,1],[-1,-1]], "max_cones": [[0,1],[1,2],[0,2]]}"#).unwrap();
    let (code, out) = symtens(&["validate", "--fan", path.to_str().unwrap()], None);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["validation"]["pass"], true);
}

#[test]
fn dims_both_on_blowup_plane() {
    let (code, out) = symtens(&["dims", "--builtin", "blowup-p2", "--p-max", "3", "--presentation", "both"], None);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["agree"], true);
    for d in v["dims"].as_array().unwrap() {
        assert_eq!(d["dims"][1], 6);
    }
}

#[test]
fn hypertoric_blowup_p3() {
    let (code, out) = symtens(&["hypertoric", "--builtin", "blowup-p3", "--theta", "1,-1"], None);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["unimodular"], true);
    assert_eq!(v["components"].as_array().unwrap().len(), 2);
    assert_eq!(v["perturbed"], true);
}

#[test]
fn output_is_identical_with_cold_and_warm_cache() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 4] = [
        &["generators", "--builtin", "blowup-p2"],
        &["dims", "--builtin", "p1xp1", "--p-max", "3"],
        &["agree", "--builtin", "hirzebruch-1", "--p-max", "2"],
        &["hypertoric", "--builtin", "blowup-p2", "--theta", "2,1"],
    ];
    for args in runs {
        let (c0, uncached) = symtens(args, None);
        let (c1, cold) = symtens(args, Some(dir.path()));
        let (c2, warm) = symtens(args, Some(dir.path()));
        assert_eq!((c0, c1, c2), (0, 0, 0));
        assert_eq!(uncached, cold);
        assert_eq!(cold, warm);
    }
    assert!(std::fs::read_dir(dir.path()).unwrap().count() >= 3);
    let explicit = tempfile::tempdir().unwrap();
    let (_, out) = symtens(&["--cache-dir", explicit.path().to_str().unwrap(), "agree", "--builtin", "p2"], None);
    assert_eq!(json(&out)["agreement"]["agree"], true);
    assert!(std::fs::read_dir(explicit.path()).unwrap().count() >= 1);
}

#[test]
fn error_paths_are_structured() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    let incomplete = dir.path().join("incomplete.json");
    std::fs::write(&incomplete, r#"{"dim": 2, "rays": [[1,0],[0,1]], "max_cones": [[0,1]]}"#).unwrap();
    let cases: [(&[&str], i32); 6] = [
        (&["dims", "--fan", bad.to_str().unwrap()], 2),
        (&["dims", "--fan", incomplete.to_str().unwrap()], 3),
        (&["dims", "--fan", "/does/not/exist.json"], 3),
        (&["hypertoric", "--builtin", "p2", "--theta", "1,x"], 2),
        (&["hypertoric", "--builtin", "p2", "--theta", "1,2"], 2),
        (&["frobnicate"], 2),
    ];
    for (args, want) in cases {
        let (code, out) = symtens(args, None);
        assert_eq!(code, want, "{args:?}: {out}");
        let v = json(&out);
        assert_eq!(v["schema_version"], 1);
        assert!(v["error"]["kind"].is_string() && v["error"]["message"].is_string());
    }
}

#[test]
fn text_format_and_examples() {
    let (code, out) = symtens(&["--format", "text", "agree", "--builtin", "p1"], None);
    assert_eq!(code, 0);
    assert!(out.contains("agree true"));
    let (code, out) = symtens(&["examples"], None);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["examples"].as_array().unwrap().len(), 14);
    let (code, out) = symtens(&["cox", "--builtin", "p3", "--presentation", "Rprime", "--format", "text"], None);
    assert_eq!(code, 0);
    assert!(out.contains("S1*T^1 + S2*T^2 + S3*T^3 + S4*T^4"));
}

#[test]
fn generators_warn_when_uncertified() {
    let (code, out) = symtens(&["generators", "--builtin", "hirzebruch-2", "--degree-bound", "2"], None);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["report"]["certified_complete"], false);
    assert!(v["report"]["warning"].is_string());
}

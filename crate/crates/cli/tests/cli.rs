use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn realcstar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_realcstar"))
        .args(args)
        .env_remove("REALCSTAR_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn cache_entries(dir: &Path) -> Vec<std::path::PathBuf> {
    fs::read_dir(dir)
        .map(|rd| rd.filter_map(Result::ok).map(|e| e.path()).collect())
        .unwrap_or_default()
}

#[test]
fn decompose_q8_and_d8() {
    let q8 = realcstar(&["--no-cache", "group", "decompose", "--builtin", "Q8"]);
    assert_eq!(q8.status.code(), Some(0));
    assert_eq!(stdout(&q8).trim(), "4·M1(R) ⊕ M1(H)");
    let d8 = realcstar(&["--no-cache", "group", "decompose", "--builtin", "D8"]);
    assert_eq!(stdout(&d8).trim(), "4·M1(R) ⊕ M2(R)");
}

#[test]
fn ksc_table() {
    let o = realcstar(&["--no-cache", "ktheory", "table", "ksc"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "KSC (period 4)\n  0: ℤ\n  1: ℤ/2\n  2: 0\n  3: ℤ\n");
}

#[test]
fn catalog_verify_succeeds() {
    let o = realcstar(&["--no-cache", "catalog", "verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("3 classes, sizes [3, 4, 3]"));
}

#[test]
fn exit_codes() {
    let missing = realcstar(&["--no-cache", "group", "decompose"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(stderr(&missing).contains("Usage:"));
    let nofile = realcstar(&["group", "types", "/definitely/not/here.json"]);
    assert_eq!(nofile.status.code(), Some(2));
    let unknown = realcstar(&["frobnicate"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(stderr(&unknown).contains("Usage:"));
    let domain = realcstar(&["--no-cache", "group", "decompose", "--builtin", "Q9"]);
    assert_eq!(domain.status.code(), Some(1));
    let help = realcstar(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout(&help).contains("catalog"));
}

#[test]
fn json_and_text_carry_the_same_data() {
    let cases: &[&[&str]] = &[
        &["group", "types", "--builtin", "S4"],
        &["group", "table", "--builtin", "Z4"],
        &["ktheory", "table", "ko-t2"],
        &["cyclic", "homology", "--builtin", "sign", "--order", "6"],
        &["space", "brauer", "--builtin", "torus"],
        &["space", "signs", "--builtin", "circle"],
        &["weyl", "su2", "--spin", "3/2", "--spin", "7"],
        &["weyl", "weil-h", "--n", "3", "--n", "4"],
        &["catalog", "list"],
        &["catalog", "bc-check"],
    ];
    for args in cases {
        let mut j = vec!["--no-cache", "--format", "json"];
        j.extend_from_slice(args);
        let mut t = vec!["--no-cache", "--format", "text"];
        t.extend_from_slice(args);
        let jo = realcstar(&j);
        let to = realcstar(&t);
        assert_eq!(jo.status.code(), Some(0), "{args:?}: {}", stderr(&jo));
        assert_eq!(to.status.code(), Some(0), "{args:?}: {}", stderr(&to));
        let v: Value = serde_json::from_slice(&jo.stdout).unwrap();
        assert_eq!(realcstar_cli::render::text(&v).unwrap(), stdout(&to), "{args:?}");
    }
}

#[test]
fn outputs_are_deterministic() {
    let a = realcstar(&["--no-cache", "--format", "json", "group", "table", "--builtin", "S5"]);
    let b = realcstar(&["--no-cache", "--format", "json", "group", "table", "--builtin", "S5"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn cache_hit_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let inputs = tempfile::tempdir().unwrap();
    let group = inputs.path().join("s3.json");
    fs::write(&group, r#"{"name": "S3", "permutations": [[1, 0, 2], [1, 2, 0]]}"#).unwrap();
    let g = group.to_str().unwrap();
    for fmt in ["json", "text"] {
        let first = realcstar(&["--cache-dir", d, "-v", "--format", fmt, "group", "decompose", g]);
        let second = realcstar(&["--cache-dir", d, "-v", "--format", fmt, "group", "decompose", g]);
        assert_eq!(first.status.code(), Some(0));
        assert_eq!(first.stdout, second.stdout);
        assert!(stderr(&second).contains("cache hit"), "{}", stderr(&second));
    }
    assert_eq!(cache_entries(dir.path()).len(), 1);
    let fresh = realcstar(&["--no-cache", "--format", "json", "group", "decompose", g]);
    let cached = realcstar(&["--cache-dir", d, "--format", "json", "group", "decompose", g]);
    assert_eq!(fresh.stdout, cached.stdout);
}

#[test]
fn cache_key_tracks_file_contents() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("cache");
    let d = d.to_str().unwrap();
    let group = dir.path().join("g.json");
    fs::write(&group, r#"{"permutations": [[1, 2, 3, 0]]}"#).unwrap();
    let g = group.to_str().unwrap();
    let z4 = realcstar(&["--cache-dir", d, "group", "decompose", g]);
    fs::write(&group, r#"{"permutations": [[1, 0, 2, 3], [0, 1, 3, 2]]}"#).unwrap();
    let v4 = realcstar(&["--cache-dir", d, "group", "decompose", g]);
    assert_eq!(stdout(&z4).trim(), "2·M1(R) ⊕ M1(C)");
    assert_eq!(stdout(&v4).trim(), "4·M1(R)");
}

#[test]
fn no_cache_leaves_directory_untouched() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let o = realcstar(&["--cache-dir", d, "--no-cache", "-v", "catalog", "verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(cache_entries(dir.path()).is_empty());
    assert!(!stderr(&o).contains("cache hit"));
}

#[test]
fn cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_realcstar"))
        .args(["weyl", "su2", "--spin", "1/2"])
        .env("REALCSTAR_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(cache_entries(dir.path()).len(), 1);
}

#[test]
fn tampered_cache_recomputes_with_warning() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["--cache-dir", d, "group", "decompose", "--builtin", "Q8"];
    let first = realcstar(&args);
    let entry = cache_entries(dir.path()).pop().unwrap();
    let text = fs::read_to_string(&entry).unwrap().replace("\"H\"", "\"C\"");
    fs::write(&entry, text).unwrap();
    let second = realcstar(&args);
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert!(stderr(&second).contains("corrupt cache entry"), "{}", stderr(&second));
    fs::write(&entry, b"\x00\x01 truncated").unwrap();
    let third = realcstar(&args);
    assert_eq!(first.stdout, third.stdout);
    assert!(stderr(&third).contains("corrupt cache entry"));
    let fourth = realcstar(&["--cache-dir", d, "-v", "group", "decompose", "--builtin", "Q8"]);
    assert!(stderr(&fourth).contains("cache hit"));
}

#[test]
fn batch_mode_processes_every_file_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let b = dir.path();
    fs::write(b.join("a_q8.json"), r#"{"name": "Q8", "permutations": [[1,2,3,0,5,6,7,4],[4,7,6,5,2,1,0,3]]}"#).unwrap();
    fs::write(b.join("b_bad.json"), "{").unwrap();
    fs::write(b.join("c_z2.json"), r#"{"table": [[0, 1], [1, 0]], "name": "Z2"}"#).unwrap();
    fs::write(b.join("ignored.txt"), "x").unwrap();
    let o = realcstar(&["--no-cache", "--format", "json", "--batch", b.to_str().unwrap(), "group", "decompose"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let results = v["results"].as_array().unwrap();
    let files: Vec<&str> = results.iter().map(|r| r["file"].as_str().unwrap()).collect();
    assert_eq!(files, ["a_q8.json", "b_bad.json", "c_z2.json"]);
    assert_eq!(results[0]["result"]["algebra"], serde_json::json!([["R", 1, 4], ["H", 1, 1]]));
    assert_eq!(results[1]["ok"], false);
    assert_eq!(results[2]["result"]["algebra"], serde_json::json!([["R", 1, 2]]));
    let with_input = realcstar(&["--batch", b.to_str().unwrap(), "group", "decompose", "--builtin", "Q8"]);
    assert_eq!(with_input.status.code(), Some(2));
    let unsupported = realcstar(&["--batch", b.to_str().unwrap(), "catalog", "list"]);
    assert_eq!(unsupported.status.code(), Some(2));
}

#[test]
fn shift_equivalence_of_files() {
    let dir = tempfile::tempdir().unwrap();
    let ko = realcstar(&["--no-cache", "--format", "json", "ktheory", "table", "ko"]);
    let ksp = realcstar(&["--no-cache", "--format", "json", "ktheory", "table", "ksp"]);
    let ko: Value = serde_json::from_slice(&ko.stdout).unwrap();
    let ksp: Value = serde_json::from_slice(&ksp.stdout).unwrap();
    fs::write(dir.path().join("ko.json"), ko["degrees"].to_string()).unwrap();
    fs::write(dir.path().join("ksp.json"), ksp["degrees"].to_string()).unwrap();
    let a = dir.path().join("ko.json");
    let b = dir.path().join("ksp.json");
    let o = realcstar(&["--no-cache", "--format", "json", "ktheory", "shift-eq", a.to_str().unwrap(), b.to_str().unwrap()]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["shifts"], serde_json::json!([4]));
    assert_eq!(v["equivalent"], true);
}

#[test]
fn space_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("segment.json");
    fs::write(&f, r#"{"vertices": 3, "maximal_simplices": [[0, 1], [1, 2]], "involution": [2, 1, 0]}"#).unwrap();
    let o = realcstar(&["--no-cache", "--format", "json", "space", "signs", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["components"], 1);
    assert_eq!(v["count"], 2);
    assert_eq!(v["space"], "segment");
    // a reflection is neither trivial nor free
    let o = realcstar(&["--no-cache", "--format", "json", "space", "brauer", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("error:"));
}

use std::path::Path;
use std::process::{Command, Output};

use dcec::curves::{f2_fixed_ab_direct, model_for_j};
use dcec::ff::FieldElement;
use dcec::mpoly::{MPoly, MonomialOrder, PolyRing};

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dcec"))
        .args(args)
        .env("DCEC_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn rejects_bad_primes() {
    let dir = tempfile::tempdir().unwrap();
    for p in ["6", "3", "1"] {
        let o = run(dir.path(), &["enumerate", "--p", p]);
        assert_eq!(o.status.code(), Some(2));
        assert!(String::from_utf8_lossy(&o.stderr).contains("p must be prime ≥ 5"));
    }
    let o = run(dir.path(), &["enumerate", "--p", "17"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(dir.path(), &["enumerate", "--p", "29", "--long-run"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn enumerates_small_characteristics() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["enumerate", "--p", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("7 | 0 | 0 | 0 | 0"));

    let report = dir.path().join("r11.json");
    let o = run(dir.path(), &["enumerate", "--p", "11", "--format", "table", "--output", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "11 | 5 | 1 | 4 | 0"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["counts"], serde_json::json!({"all": 5, "udcec": 1, "howe": 4, "other": 0}));
    assert_eq!(v["classes"].as_array().unwrap().len(), 5);
    assert!(dir.path().join("checkpoints/p11/j0.json").exists());

    let o = run(dir.path(), &["enumerate", "--p", "11", "--format", "csv", "--workers", "2"]);
    assert_eq!(stdout(&o), "p,ssing_j_invariants,all,udcec,howe,others\n11,\"0,1728\",5,1,4,0\n");

    let o = run(dir.path(), &["enumerate", "--p", "5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["counts"]["howe"], 1);
}

#[test]
fn reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let strip = |path: &Path| {
        let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("timings");
        v
    };
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    run(dir.path(), &["enumerate", "--p", "5", "--workers", "1", "--output", a.to_str().unwrap()]);
    run(&dir.path().join("other"), &["enumerate", "--p", "5", "--workers", "3", "--output", b.to_str().unwrap()]);
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn verification_suites() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["verify", "lemma32"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS"));
    let o = run(dir.path(), &["verify", "hassewitt", "--p", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(dir.path(), &["verify", "radical", "--p", "11"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS radical")).count(), 2);
    let o = run(dir.path(), &["verify", "radical"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn f2_modes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["f2", "--char0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("3381 terms"));
    assert!(dir.path().join("f2_char0.json").exists());

    let o = run(dir.path(), &["f2", "--modp", "--p", "13"]);
    assert_eq!(o.status.code(), Some(0));
    let n: usize = stdout(&o).split_whitespace().next().unwrap().parse().unwrap();
    assert!(n <= 3381);

    let out = dir.path().join("fixed.json");
    let o = run(dir.path(), &["f2", "--fixed", "--p", "11", "--j", "0", "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let m = model_for_j(11, &FieldElement(vec![0])).unwrap();
    let field = m.tower().level(1);
    let direct = f2_fixed_ab_direct(&field, &m.a, &m.b);
    let ring = PolyRing::new(field, &["a0", "a1", "a2", "a3", "a4", "a5"], MonomialOrder::Grevlex).unwrap();
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(MPoly::from_json(&ring, &v).unwrap(), direct);

    let o = run(dir.path(), &["f2", "--fixed", "--p", "11", "--a", "0", "--b", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn isomorphism_and_classification_of_files() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, a: [i64; 6]| {
        let path = dir.path().join(name);
        let json = serde_json::json!({"p": 11, "A": 0, "B": 1, "a": a});
        std::fs::write(&path, json.to_string()).unwrap();
        path
    };
    let xy = write("xy.json", [0, 1, 0, 0, 0, 0]);
    let scaled = write("scaled.json", [0, 3, 0, 0, 0, 0]);
    let howe = write("howe.json", [0, 0, 0, 1, 0, 2]);
    let o = run(dir.path(), &["classify", "--file", xy.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("type: UDCEC"));
    let o = run(dir.path(), &["classify", "--file", howe.to_str().unwrap()]);
    assert!(stdout(&o).contains("type: Howe"));
    let o = run(dir.path(), &["isom", "--file1", xy.to_str().unwrap(), "--file2", scaled.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "isomorphic");
    let o = run(dir.path(), &["isom", "--file1", xy.to_str().unwrap(), "--file2", howe.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "not isomorphic");
}

#[test]
fn lists_supersingular_models() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["supersingular", "--p", "23"]);
    let js: Vec<String> = stdout(&o).lines().skip(1).map(|l| l.split(" | ").next().unwrap().to_string()).collect();
    assert_eq!(js, ["0", "1728", "19"]);
}

use std::path::Path;
use std::process::{Command, Output};

fn orenil(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orenil")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn example(dir: &Path, name: &str) -> String {
    let o = orenil(&["examples", name, "--out", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let file = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.file_stem().is_some_and(|s| s.to_string_lossy().starts_with(name)))
        .expect("example file written");
    file.to_str().unwrap().to_string()
}

#[test]
fn words_analyze_reports_weight_and_factorization() {
    let o = orenil(&["words-analyze", "3,2,1", "--k", "1", "--decreasing", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("weight: 10"), "{text}");
    assert!(text.contains("k_valid: false"), "{text}");
    assert!(text.contains("factorization: v=() w1=(3) w2=(2) w3=(1) x=()"), "{text}");
}

#[test]
fn words_bounds_json() {
    let o = orenil(&["--json", "words-bounds", "--d", "1", "--b", "1", "--k", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["M"], "9");
    assert_eq!(v["N"], "11");
}

#[test]
fn bad_input_exits_with_two() {
    assert_eq!(orenil(&["words-analyze", "3,x,1"]).status.code(), Some(2));
    assert_eq!(orenil(&["words-bounds", "--d", "1", "--b", "1", "--epsilon", "3/2"]).status.code(), Some(2));
    assert_eq!(orenil(&["radical-check", "/nonexistent/algebra.json"]).status.code(), Some(2));
}

#[test]
fn charp_radical_is_unstable() {
    let dir = tempfile::tempdir().unwrap();
    let file = example(dir.path(), "charp");
    let ok = orenil(&["radical-check", &file, "--derivation", "d", "--candidate", "t,t^2", "--expect", "unstable"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    let mismatch = orenil(&["radical-check", &file, "--derivation", "d", "--candidate", "t,t^2", "--expect", "stable"]);
    assert_eq!(mismatch.status.code(), Some(1));
}

#[test]
fn nilpotency_cap_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let file = example(dir.path(), "charp");
    let o = orenil(&["ore-nilpotency", &file, "--set", "1", "--derivation", "d", "--cap", "4"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn rewrite_matches_direct_product() {
    let dir = tempfile::tempdir().unwrap();
    let file = example(dir.path(), "upper3strict");
    let o = orenil(&[
        "ore-rewrite", "--indices", "0,1", "--exponents", "1,0", "--k", "1", "--file", &file, "--generators", "e12;e23",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("1 | 0,1 | 1 | 0"), "{}", stdout(&o));
}

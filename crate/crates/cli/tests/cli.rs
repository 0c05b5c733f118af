//! End-to-end CLI behavior: exit codes, canonical round trips, determinism,
//! and the error surface.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_trialab"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("trialab-test-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn build_para_cayley_gf7_passes_and_writes() {
    let dir = tmpdir("build-pc");
    let out = run(&dir, &["compose", "build", "--kind", "para-cayley", "--field", "7", "--out", "pc.json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.join("pc.json")).unwrap();
    assert!(text.contains("\"kind\": \"symmetric\""));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("derivation dimension 14"));
}

#[test]
fn build_okubo_gf5_fails_with_exit_1() {
    let dir = tmpdir("build-ok5");
    let out = run(&dir, &["compose", "build", "--kind", "okubo", "--field", "5"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("1 mod 3"), "unexpected stderr: {err}");
}

#[test]
fn build_okubo_gf4_reports_derivation_dimension() {
    let dir = tmpdir("build-ok4");
    let out = run(&dir, &["compose", "build", "--kind", "okubo", "--field", "4", "--out", "ok.json"]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("derivation dimension 8"));
}

#[test]
fn induce_then_validate_round_trip() {
    let dir = tmpdir("induce");
    assert!(run(&dir, &["compose", "build", "--kind", "para-cayley", "--field", "4", "--out", "pc.json"]).status.success());
    let out = run(&dir, &["compose", "induce", "--in", "pc.json", "--out", "gamma.json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.join("gamma.json")).unwrap();
    assert!(text.contains("\"kind\": \"cyclic\""));
    assert!(text.contains("\"induced_basis\": true"));
    // basis tensor of the induced file equals the embedded symmetric tensor:
    // over GF(4) inside GF(64) the embedding is coordinate extension, checked
    // here by the descent round trip below instead of byte comparison
    let out = run(&dir, &["triality", "descend", "--gamma", "gamma.json", "--t", "rhohat", "--out", "back.json"]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    // xi is the identity of GF(4), printed as a length-2 coordinate vector
    assert!(stdout.contains("xi   = [1, 0]"), "{stdout}");
}

#[test]
fn canonical_serialization_round_trips_byte_identically() {
    let dir = tmpdir("canon");
    assert!(run(&dir, &["compose", "build", "--kind", "okubo", "--field", "7", "--out", "a.json"]).status.success());
    // re-emit through induce's loader by descending the induced structure
    assert!(run(&dir, &["compose", "induce", "--in", "a.json", "--out", "g.json"]).status.success());
    assert!(run(&dir, &["triality", "descend", "--gamma", "g.json", "--t", "rhohat", "--out", "b.json"]).status.success());
    let a = std::fs::read_to_string(dir.join("a.json")).unwrap();
    let b = std::fs::read_to_string(dir.join("b.json")).unwrap();
    // identical structure constants; only provenance notes differ
    let strip = |s: &str| -> String {
        s.lines()
            .filter(|l| !l.contains("provenance"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn reports_are_bit_deterministic() {
    let dir = tmpdir("determinism");
    assert!(run(&dir, &["compose", "build", "--kind", "para-cayley", "--field", "7", "--out", "pc.json"]).status.success());
    assert!(run(&dir, &["compose", "induce", "--in", "pc.json", "--out", "g.json"]).status.success());
    let args = ["triality", "descend", "--gamma", "g.json", "--t", "rhohat", "--report", "r.json", "--seed", "99"];
    assert!(run(&dir, &args).status.success());
    let first = std::fs::read(dir.join("r.json")).unwrap();
    assert!(run(&dir, &args).status.success());
    let second = std::fs::read(dir.join("r.json")).unwrap();
    assert_eq!(first, second);
}

#[test]
fn seed_env_var_is_honored() {
    let dir = tmpdir("seed-env");
    assert!(run(&dir, &["compose", "build", "--kind", "para-cayley", "--field", "7", "--out", "pc.json"]).status.success());
    let out = bin()
        .current_dir(&dir)
        .env("TRIALAB_SEED", "1234")
        .args(["compose", "induce", "--in", "pc.json", "--out", "g.json", "--report", "r.json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let report = std::fs::read_to_string(dir.join("r.json")).unwrap();
    assert!(report.contains("\"seed\": 1234"));
}

#[test]
fn malformed_json_exits_2_with_location() {
    let dir = tmpdir("malformed");
    std::fs::write(dir.join("bad.json"), "{\"oops\": ").unwrap();
    let out = run(&dir, &["triality", "descend", "--gamma", "bad.json", "--t", "rhohat"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line"), "stderr should carry a location: {err}");
}

#[test]
fn usage_error_exits_2() {
    let dir = tmpdir("usage");
    let out = run(&dir, &["compose", "build", "--kind", "para-cayley", "--field", "12"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn corrupted_structure_fails_validation_with_witness() {
    let dir = tmpdir("corrupt");
    assert!(run(&dir, &["compose", "build", "--kind", "para-cayley", "--field", "7", "--out", "pc.json"]).status.success());
    let text = std::fs::read_to_string(dir.join("pc.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let mut v = v;
    // corrupt one tensor entry
    let entry = &mut v["tensor"][3][4][2][0];
    let old = entry.as_u64().unwrap();
    *entry = serde_json::Value::from((old + 1) % 7);
    std::fs::write(dir.join("pc.json"), serde_json::to_string(&v).unwrap()).unwrap();
    let out = run(&dir, &["compose", "induce", "--in", "pc.json", "--out", "g.json"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("failed"), "stderr: {err}");
}

#[test]
fn classify_rejects_mismatched_base_fields() {
    let dir = tmpdir("mismatch");
    assert!(run(&dir, &["compose", "build", "--kind", "para-cayley", "--field", "7", "--out", "pc7.json"]).status.success());
    assert!(run(&dir, &["compose", "build", "--kind", "para-cayley", "--field", "4", "--out", "pc4.json"]).status.success());
    assert!(run(&dir, &["compose", "induce", "--in", "pc7.json", "--out", "g7.json"]).status.success());
    assert!(run(&dir, &["compose", "induce", "--in", "pc4.json", "--out", "g4.json"]).status.success());
    let out = run(&dir, &["triality", "classify", "--gamma1", "g7.json", "--t1", "rhohat", "--gamma2", "g4.json", "--t2", "rhohat"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn classify_para_cayley_vs_okubo_gf4_prints_not_conjugate() {
    let dir = tmpdir("classify-gf4");
    assert!(run(&dir, &["compose", "build", "--kind", "para-cayley", "--field", "4", "--out", "pc.json"]).status.success());
    assert!(run(&dir, &["compose", "build", "--kind", "okubo", "--field", "4", "--out", "ok.json"]).status.success());
    assert!(run(&dir, &["compose", "induce", "--in", "pc.json", "--out", "gpc.json"]).status.success());
    assert!(run(&dir, &["compose", "induce", "--in", "ok.json", "--out", "gok.json"]).status.success());
    let out = run(&dir, &["triality", "classify", "--gamma1", "gpc.json", "--t1", "rhohat", "--gamma2", "gok.json", "--t2", "rhohat"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("verdict: not-conjugate"), "{stdout}");
    assert!(stdout.contains("idempotent census"), "{stdout}");
}

#[test]
fn demo_fq_rejects_q5() {
    let dir = tmpdir("demo5");
    let out = run(&dir, &["demo", "fq", "--q", "5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn tau_emits_generator_file() {
    let dir = tmpdir("tau");
    assert!(run(&dir, &["compose", "build", "--kind", "okubo", "--field", "7", "--out", "ok.json"]).status.success());
    let out = run(&dir, &["triality", "tau", "--sigma", "ok.json", "--out", "t.json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.join("t.json")).unwrap();
    assert!(text.contains("\"kind\": \"semilinear-isotopy\""));
    assert!(text.contains("\"aut_power\": 1"));
}

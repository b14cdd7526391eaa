use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cartan-super"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn construct(dir: &Path, family: &str, n: &str, t: &str) -> String {
    let path = dir.join(format!("{family}.json"));
    let p = path.to_str().unwrap().to_string();
    let out = run(&[
        "construct",
        "--family",
        family,
        "--n",
        n,
        "--t",
        t,
        "--p",
        "5",
        "--out",
        &p,
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    p
}

#[test]
fn construct_writes_the_algebra() {
    let dir = tempfile::tempdir().unwrap();
    let p = construct(dir.path(), "HO", "2", "1,1");
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
    assert_eq!(v["family"], "HO");
    assert_eq!(v["basis"].as_array().unwrap().len(), 99);
}

#[test]
fn construct_to_stdout_is_deterministic() {
    let a = run(&[
        "construct",
        "--family",
        "ko",
        "--n",
        "1",
        "--t",
        "1",
        "--p",
        "5",
    ]);
    let b = run(&[
        "construct",
        "--family",
        "KO",
        "--n",
        "1",
        "--t",
        "1",
        "--p",
        "5",
    ]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn weights_json_and_table() {
    let dir = tempfile::tempdir().unwrap();
    let p = construct(dir.path(), "HO", "2", "1,1");
    let out = run(&["weights", "--in", &p, "--degree", "-1"]);
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 4);
    let table = run(&["weights", "--in", &p, "--table"]);
    let text = String::from_utf8(table.stdout).unwrap();
    assert!(text.starts_with("degree") || text.trim_start().starts_with("degree"));
}

#[test]
fn cohomology_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let p = construct(dir.path(), "KO", "1", "1");
    for mode in ["full", "blockwise"] {
        let out = run(&["cohomology", "--in", &p, "--what", "h2", "--mode", mode]);
        assert!(out.status.success());
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["mode"], mode);
        assert!(v["h2_dim"].is_u64());
    }
    let out = run(&["cohomology", "--in", &p, "--what", "h1dual"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["h1_dual_dim"].is_u64());
}

#[test]
fn hamiltonian_h2_from_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let p = construct(dir.path(), "HO", "2", "1,1");
    let out = run(&["cohomology", "--in", &p, "--what", "h2"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["h2_dim"], 1);
    assert_eq!(v["h2_odd_dim"], 1);
}

#[test]
fn verify_exit_code_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let out = bin()
        .args([
            "verify", "--family", "KO", "--n", "2", "--t", "1,1", "--p", "5", "--suite", "fast",
            "--json",
        ])
        .arg(&json)
        .env("CARTAN_SUPER_THREADS", "2")
        .output()
        .unwrap();
    // the rho check fails at this signature
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("FAIL     rho-isomorphism"));
    assert!(stdout.contains("reproduce: cartan-super verify --family KO"));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["status"], "FAIL");
    assert_eq!(v["suite"], "fast");
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c.get("elapsed_ms").is_none()));
}

#[test]
fn invalid_input_is_a_usage_error() {
    let out = run(&[
        "construct",
        "--family",
        "HO",
        "--n",
        "2",
        "--t",
        "1,1",
        "--p",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("prime"));
    let out = run(&["weights", "--in", "/nonexistent/file.json"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args([
            "construct",
            "--family",
            "HO",
            "--n",
            "1",
            "--t",
            "1",
            "--p",
            "5",
        ])
        .env("CARTAN_SUPER_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

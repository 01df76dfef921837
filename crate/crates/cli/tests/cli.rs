use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fellb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fellb")).args(args).env_remove("FELLB_SEED").output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fellb-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn export_z2(dir: &Path) -> PathBuf {
    let out = fellb(&["export", "trivial-z2"]);
    assert!(out.status.success());
    let path = dir.join("z2.json");
    std::fs::write(&path, &out.stdout).unwrap();
    path
}

const R: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[test]
fn exported_bundle_verifies() {
    let dir = scratch("verify");
    let path = export_z2(&dir);
    let out = fellb(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["passed"], Value::Bool(true));
}

#[test]
fn corrupted_fiber_names_the_axiom() {
    let dir = scratch("corrupt");
    let path = export_z2(&dir);
    let mut d: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    // the odd fiber picks up a diagonal entry, so it stops being odd
    d["fibers"]["1"][0][0][0] = serde_json::json!([0.7, 0.3]);
    std::fs::write(&path, d.to_string()).unwrap();
    let out = fellb(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("grading"), "{err}");
}

#[test]
fn non_square_matrix_is_a_parse_error_with_line() {
    let dir = scratch("nonsquare");
    let path = dir.join("ns.json");
    std::fs::write(
        &path,
        "{\"group\": {\"order\": 1, \"cayley\": [[0]]},\n\"ambient_dim\": 1,\n\"fibers\": {\"0\": [[[[1,0],[0,0]]]]}}",
    )
    .unwrap();
    let out = fellb(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("not square") && err.contains("line 3"), "{err}");
}

#[test]
fn missing_file_exits_2() {
    let out = fellb(&["verify", "/nonexistent/bundle.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn suite_passes_and_is_deterministic() {
    let a = fellb(&["suite", "--no-timings"]);
    let b = fellb(&["suite", "--no-timings"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let report = stdout_json(&a);
    let records = report["records"].as_array().unwrap();
    assert_eq!(records.len(), 12);
    assert!(records.iter().all(|r| r["status"] == "pass"));
}

#[test]
fn suite_statuses_do_not_depend_on_seed() {
    let statuses = |out: &Output| -> Vec<String> {
        stdout_json(out)["records"].as_array().unwrap().iter().map(|r| r["status"].to_string()).collect()
    };
    let a = fellb(&["suite", "--no-timings", "--seed", "1"]);
    let b = fellb(&["suite", "--no-timings", "--seed", "987654321"]);
    assert_eq!(statuses(&a), statuses(&b));
}

#[test]
fn suite_writes_csv() {
    let dir = scratch("csv");
    let csv = dir.join("suite.csv");
    let json = dir.join("suite.json");
    let out =
        fellb(&["suite", "--family", "trivial", "--csv", csv.to_str().unwrap(), "--json", json.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(csv).unwrap();
    assert!(text.starts_with("name,anchor,status,residual,ms\n"));
    assert_eq!(text.lines().count(), 13);
    assert!(std::fs::read_to_string(json).unwrap().contains("\"records\""));
}

#[test]
fn cap_exceeded_exits_2() {
    let out = fellb(&["suite", "--max-order", "13"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn norm_of_sum_of_unitaries_on_z2() {
    let dir = scratch("norm");
    export_z2(&dir);
    let section = dir.join("sec.json");
    // δ_e ⊗ 1 + δ_1 ⊗ U_1 with bundle path relative to the section file
    std::fs::write(
        &section,
        r#"{"bundle": "z2.json", "values": {"0": [[[1,0],[0,0]],[[0,0],[1,0]]], "1": [[[0,0],[1,0]],[[1,0],[0,0]]]}}"#,
    )
    .unwrap();
    let out = fellb(&["norm", "--section", section.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert!((v["universal"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    assert!((v["l1"].as_f64().unwrap() - 2.0).abs() < 1e-9);
}

fn write_character(dir: &Path) -> PathBuf {
    let path = dir.join("chi.json");
    let h = 0.5;
    std::fs::write(
        &path,
        serde_json::json!({"components": {
            "0": [[[h, 0], [0, 0]], [[0, 0], [h, 0]]],
            "1": [[[0, 0], [h, 0]], [[h, 0], [0, 0]]],
        }})
        .to_string(),
    )
    .unwrap();
    path
}

#[test]
fn character_functional_has_norm_one_and_one_dimensional_gns() {
    let dir = scratch("chi");
    let bundle = export_z2(&dir);
    let chi = write_character(&dir);
    let args = ["--bundle", bundle.to_str().unwrap(), "--functional", chi.to_str().unwrap()];
    let out = fellb(&[&["bnorm"][..], &args].concat());
    assert!((stdout_json(&out)["bnorm"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    let out = fellb(&[&["posdef"][..], &args].concat());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["status"], "positive");
    let out = fellb(&[&["gns"][..], &args].concat());
    let v = stdout_json(&out);
    assert_eq!(v["dim"], 1);
    assert!((v["eta_norm_squared"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn non_positive_functional_exits_1() {
    let dir = scratch("nonpos");
    let bundle = export_z2(&dir);
    let path = dir.join("phi.json");
    // u = (1, 2) on the group: the 2x2 Toeplitz matrix has eigenvalue −1
    let (a, b) = (R * R, R * R * 2.0);
    std::fs::write(
        &path,
        serde_json::json!({"components": {
            "0": [[[a, 0], [0, 0]], [[0, 0], [a, 0]]],
            "1": [[[0, 0], [b, 0]], [[b, 0], [0, 0]]],
        }})
        .to_string(),
    )
    .unwrap();
    let args = ["--bundle", bundle.to_str().unwrap(), "--functional", path.to_str().unwrap()];
    let out = fellb(&[&["posdef"][..], &args].concat());
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["status"], "not_positive");
    assert_eq!(fellb(&[&["gns"][..], &args].concat()).status.code(), Some(1));
}

#[test]
fn folner_ratio_for_half() {
    let out = fellb(&["fourier", "folner", "--family", "dynamical-diag-m2-z2", "--K", "0", "--eps", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!((v["ratio"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-8);
    assert!(v["norm_upper"].as_f64().unwrap() <= 1.0);
}

#[test]
fn eymard_vanishes_off_k() {
    let out = fellb(&["fourier", "eymard", "--family", "dynamical-group-algebra-z3-z2", "--K", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_json(&out)["support"], serde_json::json!([1]));
}

#[test]
fn eymard_on_a_non_dynamical_family_exits_2() {
    let out = fellb(&["fourier", "eymard", "--family", "graded-m2-z2", "--K", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn seed_is_read_from_environment() {
    let run = |seed: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_fellb"));
        c.args(["fourier", "norm", "--family", "dynamical-diag-m2-z2"]);
        match seed {
            Some(s) => c.env("FELLB_SEED", s),
            None => c.env_remove("FELLB_SEED"),
        };
        c.output().unwrap().stdout
    };
    let flag = fellb(&["fourier", "norm", "--family", "dynamical-diag-m2-z2", "--seed", "99"]).stdout;
    assert_eq!(run(Some("99")), flag);
    assert_ne!(run(None), flag);
}

#[test]
fn takai_instances_agree() {
    let out = fellb(&["takai"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_json(&out).as_array().unwrap().iter().all(|r| r["equal"] == Value::Bool(true)));
}

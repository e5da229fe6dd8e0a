use std::process::{Command, Output};

use serde_json::Value;

fn ktinv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ktinv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    assert_eq!(code(o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("json report")
}

#[test]
fn pair_invariants_of_the_canonical_pair() {
    let v = json(&ktinv(&["invariants", "--pair", "polar:0,0", "eh:4", "--format", "json"]));
    let inv = &v["invariants"];
    let got: Vec<f64> = (1..=9).map(|i| inv[format!("d{i}")].as_f64().unwrap()).collect();
    assert_eq!(got, [1.0, 0.0, 0.0, 1.0, 4.0, 16.0, 4.0, 4.0, 4.0]);
    assert_eq!(v["pair_class"]["class"], "SWCanonical");
    assert_eq!(v["config"]["samples"], 240);
}

#[test]
fn ttw_scan_csv() {
    let o = ktinv(&["ttw-scan", "--omega", "1", "--alpha", "1", "--beta", "1", "--k", "1,2", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("k,dim,verdict"));
    assert!(lines[1].starts_with("1.0,3,MultiSeparable,"));
    assert!(lines[2].starts_with("2.0,2,PolarOnly,"));
    let o = ktinv(&["ttw-scan", "--alpha", "2", "--beta", "3", "--k", "0.5,-1", "--format", "csv"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("0.5,2,PolarOnly,"));
    assert!(text.lines().nth(2).unwrap().starts_with("-1.0,3,MultiSeparable,"));
}

#[test]
fn equal_couplings_at_half_k_report_three() {
    // α = β turns k = 1/2 into an SW-type potential
    let o = ktinv(&["ttw-scan", "--k", "0.5", "--format", "csv"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("0.5,3,MultiSeparable,"));
}

#[test]
fn compatible_with_both_backends_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sw.json");
    let p = path.to_str().unwrap();
    let args = [
        "compatible", "--family", "sw", "--omega", "1", "--alpha", "2", "--beta", "3", "--backend",
        "both", "--out", p,
    ];
    let o = ktinv(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let first = std::fs::read(&path).unwrap();
    let v: Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(v["numeric"]["dim"], 3);
    assert_eq!(v["exact"]["dim"], 3);
    assert_eq!(v["exact"]["certificate"]["rank"], 3);
    assert_eq!(v["numeric"]["basis"].as_array().unwrap().len(), 3);
    assert_eq!(v["config"]["backend"], "both");

    // identical config gives identical bytes
    assert_eq!(code(&ktinv(&args)), 0);
    assert_eq!(std::fs::read(&path).unwrap(), first);

    let back = json(&ktinv(&["compatible", "--input", p]));
    assert_eq!(back["mode"], "revalidate");
    assert_eq!(back["revalidated"].as_array().unwrap().len(), 2);

    // a basis vector that is not compatible fails validation
    let mut bad = v.clone();
    bad["numeric"]["basis"][0] = serde_json::json!([0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
    bad["exact"] = Value::Null;
    let bad_path = dir.path().join("bad.json");
    std::fs::write(&bad_path, serde_json::to_vec(&bad).unwrap()).unwrap();
    assert_eq!(code(&ktinv(&["compatible", "--input", bad_path.to_str().unwrap()])), 3);
}

#[test]
fn dual_solve_and_degeneracy() {
    let v = json(&ktinv(&["dual-solve", "--tensor", "polar:0,2", "eh:4"]));
    assert_eq!(v["family"]["dim"], 1);
    let a = v["family"]["basis"][0][1].as_f64().unwrap();
    assert!((a.abs() - 1.0).abs() < 1e-9);
    let v = json(&ktinv(&["degeneracy"]));
    let dims: Vec<u64> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["surviving_family"]["dim"].as_u64().unwrap())
        .collect();
    assert_eq!(dims, [0, 1, 1, 3]);
    assert!(v["rows"][1]["discrepancy_note"].is_string());
    assert!(v["rows"][0]["discrepancy_note"].is_null());
}

#[test]
fn classify_and_transform() {
    let v = json(&ktinv(&["classify", "--tensor", "polar:1.5,-0.5"]));
    assert_eq!(v["class"], "Polar");
    let v = json(&ktinv(&["classify", "--pair", "polar:1,0", "eh:4"]));
    assert_eq!(v["pair_class"]["class"], "PolarEH_Collinear");
    let v = json(&ktinv(&["transform", "--tensor", "eh:4", "--g", "-1,2,0.5"]));
    for d in ["d1", "d2", "d3"] {
        let (a, b) = (v["invariants_before"][d].as_f64().unwrap(), v["invariants_after"][d].as_f64().unwrap());
        assert!((a - b).abs() < 1e-12 * a.abs().max(1.0));
    }
}

#[test]
fn audit_is_reproducible() {
    let a = ktinv(&["audit", "--trials", "50", "--seed", "3"]);
    let b = ktinv(&["audit", "--trials", "50", "--seed", "3"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn formats() {
    let o = ktinv(&["degeneracy", "--a", "1", "--b", "1", "--format", "markdown"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("# ktinv degeneracy"));
    assert!(text.contains("| a | b | ell |"));
    let o = ktinv(&["invariants", "--tensor", "eh:4", "--format", "csv"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().nth(1).unwrap(), "1.0,4.0,16.0,EllipticHyperbolic");
}

#[test]
fn exit_codes() {
    assert_eq!(code(&ktinv(&["nonsense"])), 64);
    assert_eq!(code(&ktinv(&["compatible", "--family", "sw", "--samples", "5"])), 64);
    assert_eq!(code(&ktinv(&["compatible", "--family", "sw", "--tol", "0"])), 64);
    assert_eq!(code(&ktinv(&["invariants", "--tensor", "bogus:1"])), 64);
    assert_eq!(code(&ktinv(&["compatible", "--family", "ttw", "--k", "2", "--backend", "exact"])), 2);
    assert_eq!(code(&ktinv(&["invariants", "--pair", "metric", "eh:4"])), 2);
    assert_eq!(code(&ktinv(&["invariants", "--tensor", "eh:-1"])), 2);
    assert_eq!(code(&ktinv(&["compatible", "--input", "/nonexistent/report.json"])), 64);
    assert_eq!(code(&ktinv(&["--help"])), 0);
}

#[test]
fn thread_cap_is_honoured_and_checked() {
    let run = |v: &str| {
        Command::new(env!("CARGO_BIN_EXE_ktinv"))
            .args(["ttw-scan", "--k", "1,2", "--format", "csv"])
            .env("KT_INVARIANTS_THREADS", v)
            .output()
            .unwrap()
    };
    let one = run("1");
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, run("4").stdout);
    assert_eq!(code(&run("zero")), 64);
}

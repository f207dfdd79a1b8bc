use std::process::{Command, Output};

use serde_json::Value;

fn siqs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_siqs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}\nstdout: {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

#[test]
fn spectrum_lists_the_ground_branch() {
    let out = siqs(&["spectrum", "p6", "--params", "hbar=1,alpha=-1", "--pmax", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    let reps = v["representations"].as_array().unwrap();
    assert!(reps.iter().any(|r| r["energy"] == "(p+3)/2" && r["admitted"].as_array().unwrap().len() == 9));
    assert!(v["typo_ledger"].as_array().unwrap().iter().all(|t| t["equation_label"].is_string()));
}

#[test]
fn ladder_check_reports_the_certificate() {
    let out = siqs(&["ladder-check", "p1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let x = &v["ladder"]["x"];
    assert_eq!(x["lambda"], "1/2*hbar^2*alpha^-1");
    assert_eq!(x["q"], "2*E^3 - 7/2*E^2*hbar^2*alpha^-1 + 7/8*E*hbar^4*alpha^-2 + 15/32*hbar^6*alpha^-3");
    assert_eq!(v["ladder"]["pass"], true);
}

#[test]
fn usage_errors_exit_one() {
    let out = siqs(&["algebra", "unknown-pot"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown potential"));

    let out = siqs(&["spectrum", "p6", "--params", "hbar=1,alpha=-0.5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1/2"));

    assert_eq!(siqs(&["spectrum", "p6", "--pmax", "65"]).status.code(), Some(1));
    assert_eq!(siqs(&["numeric-check", "p6", "--grid", "2000000"]).status.code(), Some(1));
    assert_eq!(siqs(&["no-such-command"]).status.code(), Some(1));
}

#[test]
fn failed_comparison_exits_two_with_a_report() {
    // a tolerance no finite-difference run can meet
    let out = siqs(&["numeric-check", "p6", "--grid", "1000", "--tol", "1e-14"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["numeric"]["comparison"]["pass"], false);
}

#[test]
fn numeric_check_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("cmp.csv");
    let out = siqs(&["numeric-check", "p5", "--params", "hbar=1,alpha=-1", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("E_numeric,E_algebraic,residual,branch_id"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.len() >= 10);
    for r in rows {
        let residual: f64 = r.split(',').nth(2).unwrap().parse().unwrap();
        assert!(residual < 1e-3, "{r}");
    }
}

#[test]
fn algebra_file_round_trips_through_phi() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["p6", "p5"] {
        let path = dir.path().join(format!("{name}.json"));
        let path = path.to_str().unwrap();
        assert_eq!(siqs(&["algebra", name, "--out", path]).status.code(), Some(0));
        let again = siqs(&["algebra", path]);
        assert_eq!(again.stdout, std::fs::read(path).unwrap(), "normalised copy is byte identical");

        let from_catalog = json(&siqs(&["phi", name]));
        let from_file = json(&siqs(&["phi", path]));
        assert_eq!(from_catalog["phi"], from_file["phi"]);
        assert_eq!(from_catalog["casimir"], from_file["casimir"]);
        assert_eq!(from_file["phi"]["relations"]["b_c"], true);
    }
}

#[test]
fn full_report_is_deterministic() {
    let args = ["full-report", "p6", "--grid", "400", "--tol", "1e-2"];
    let a = siqs(&args);
    let b = siqs(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    for key in ["schema", "potential", "params", "ladder", "algebra", "casimir", "phi", "representations", "numeric", "typo_ledger"] {
        assert!(!v[key].is_null(), "missing {key}");
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let one = Command::new(env!("CARGO_BIN_EXE_siqs"))
        .args(["spectrum", "p5"])
        .env("SIQS_THREADS", "1")
        .output()
        .unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_siqs"))
        .args(["spectrum", "p5"])
        .env("SIQS_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_siqs"))
        .args(["spectrum", "p5"])
        .env("SIQS_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn casimir_reports_energy_polynomial() {
    let v = json(&siqs(&["casimir", "p6"]));
    let k = v["casimir"].as_str().unwrap();
    assert!(k.contains("E^6"), "{k}");
}

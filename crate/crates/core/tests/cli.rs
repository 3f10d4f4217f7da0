use std::process::{Command, Output};

use serde_json::Value;

fn bggfe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bggfe")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn row<'a>(v: &'a Value, element: &str) -> &'a Value {
    v["rows"].as_array().unwrap().iter().find(|r| r["element"] == element).unwrap_or_else(|| panic!("no row {element}"))
}

#[test]
fn dims_of_the_stress_catalog() {
    let out = bggfe(&["dims", "--mesh", "unit-square-cc"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["macro_kind"], "crisscross");
    assert_eq!(row(&v, "W2")["global_dim"], 11);
    assert_eq!(row(&v, "Y2")["local_dim"], 8);
    assert_eq!(row(&v, "Y1")["interior_dofs"], 16);
    assert_eq!(row(&v, "W1")["interior_dofs"], 10);
    assert_eq!(row(&v, "ker(-2 sskw)")["local_dim"], 21);
}

#[test]
fn dims_of_one_strain_element() {
    let out = bggfe(&["dims", "--mesh", "unit-triangle-ct", "--element", "V0", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("element,macro_kind,local_dim,vertex_dofs,edge_dofs,interior_dofs,global_dim"));
    assert_eq!(lines.next(), Some("V0,ct,12,9,3,0,12"));
    assert_eq!(lines.next(), None);
}

#[test]
fn unknown_names_exit_with_usage_errors() {
    let out = bggfe(&["dims", "--element", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("W0") && err.contains("V2"), "{err}");
    let out = bggfe(&["dims", "--mesh", "no-such-mesh"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("unit-square-cc"), "{err}");
    assert_eq!(bggfe(&["curvature", "--check", "nope"]).status.code(), Some(2));
    assert_eq!(bggfe(&["curvature", "--cases", "0"]).status.code(), Some(2));
}

#[test]
fn stress_verification_on_a_grid() {
    let out = bggfe(&["verify", "--mesh", "grid:2x2:cc", "--diagram", "stress"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["mesh"], "grid:2x2:cc");
    let derived: Vec<i64> = v["cohomology"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["complex"] == "derived stress")
        .map(|c| c["dim"].as_i64().unwrap())
        .collect();
    assert_eq!(derived, vec![3, 0, 0]);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
}

#[test]
fn strain_verification_needs_ct_macros() {
    let out = bggfe(&["verify", "--mesh", "unit-triangle-ct"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["diagram"], "strain");
    let out = bggfe(&["verify", "--mesh", "grid:2x2:cc", "--diagram", "strain"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn markdown_verification_report() {
    let out = bggfe(&["verify", "--mesh", "unit-square-cc", "--format", "md"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# stress diagram on unit-square-cc"), "{text}");
    assert!(text.contains("| W2 |"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["curvature", "--check", "bianchi", "--seed", "11", "--cases", "5"];
    let a = bggfe(&args);
    let b = bggfe(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
    let c = bggfe(&["curvature", "--check", "bianchi", "--seed", "12", "--cases", "5"]);
    assert_eq!(a.status.code(), c.status.code());
}

#[test]
fn einstein_identity_passes_over_a_seed() {
    let out = bggfe(&["curvature", "--check", "einstein-3d", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["results"][0]["cases"], 50);
    assert_eq!(v["results"][0]["status"], "pass");
}

#[test]
fn stated_rotrot_form_fails_with_exit_one() {
    let out = bggfe(&["curvature", "--check", "rotrot-2d", "--seed", "3", "--cases", "4"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("FAILED: rotrot-2d (2D)"), "{err}");
    assert!(!err.contains("rotrot-2d-corrected"), "{err}");
}

#[test]
fn vectors_file_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("vectors.json");
    std::fs::write(
        &input,
        r#"[{"dimension": 3,
             "h": [["x*y", "z^2", "0"], ["z^2", "y^3", "x"], ["0", "x", "x*z^2"]],
             "points": [["1", "0", "1/3"], ["-2", "1/2", "5"]]}]"#,
    )
    .unwrap();
    let report = dir.path().join("report.csv");
    let out = bggfe(&[
        "curvature",
        "--check",
        "einstein-3d",
        "--input",
        input.to_str().unwrap(),
        "--format",
        "csv",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&report).unwrap();
    assert_eq!(text.lines().nth(1).unwrap(), "einstein-3d,3,stated,Ein'(h) = ½ inc h,2,0,0,pass");

    let missing = dir.path().join("missing.json");
    let out = bggfe(&["curvature", "--input", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

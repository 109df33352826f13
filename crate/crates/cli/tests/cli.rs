use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_krein-photon");

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(BIN)
        .args(args)
        .current_dir(dir)
        .env("KREIN_PHOTON_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn num(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

fn packets() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, label: &str| {
        std::fs::write(
            dir.path().join(name),
            format!(r#"{{"terms":[{{"label":"{label}","center":[2.1,2.8,0.0],"sigma":0.5}}]}}"#),
        )
        .unwrap()
    };
    write("tr.json", "w1+");
    write("null.json", "wr2");
    std::fs::write(
        dir.path().join("bad.json"),
        r#"{"terms":[{"label":"w1+","center":[0.1,0,0],"sigma":0.5}]}"#,
    )
    .unwrap();
    dir
}

#[test]
fn eval_gram_reports_the_eigenvalue_law() {
    let dir = tempfile::tempdir().unwrap();
    let v = json_of(&run(&["eval", "B", "--p", "2,0,0,2"], dir.path()));
    assert_eq!(v["schema"], 1);
    let eig: Vec<f64> = v["metadata"]["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(num)
        .collect();
    for (got, want) in eig.iter().zip([0.25, 1.0, 1.0, 4.0]) {
        assert!((got - want).abs() < 1e-12, "{eig:?}");
    }
}

#[test]
fn eval_section_at_the_standard_point_is_the_identity() {
    let dir = tempfile::tempdir().unwrap();
    let v = json_of(&run(&["eval", "beta", "--p", "1,0,0,1"], dir.path()));
    let m = &v["value"];
    for i in 0..2 {
        for j in 0..2 {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((num(&m[i][j][0]) - want).abs() < 1e-15);
            assert!(num(&m[i][j][1]).abs() < 1e-15);
        }
    }
}

#[test]
fn eval_theta_of_a_rotation_about_the_first_axis() {
    // sin carries the sign fixed by the definition of Θ⁻₊, opposite to the
    // angle of the rotation
    let dir = tempfile::tempdir().unwrap();
    let v = json_of(&run(
        &["eval", "theta", "--alpha", "rot23:0.7", "--p", "1,1,0,0"],
        dir.path(),
    ));
    assert!((num(&v["value"]["cos"]) - 0.7f64.cos()).abs() < 1e-12);
    assert!((num(&v["value"]["sin"]) + 0.7f64.sin()).abs() < 1e-12);
}

#[test]
fn eval_wigner_element_lies_in_the_little_group() {
    let dir = tempfile::tempdir().unwrap();
    let v = json_of(&run(
        &["eval", "wigner", "--alpha", "boost03:0.4*rot13:1.1", "--p", "3,1,2,2"],
        dir.path(),
    ));
    assert!(num(&v["metadata"]["little_group_residual"]) < 1e-12);
}

#[test]
fn raw_elements_report_their_projection() {
    let dir = tempfile::tempdir().unwrap();
    let v = json_of(&run(&["eval", "V", "--alpha", "raw:2,0,0,0,0,0,2,0"], dir.path()));
    assert!((num(&v["alpha"]["projection_correction"]) - 1.0).abs() < 1e-12);
    assert!(num(&v["metadata"]["metric_residual"]) < 1e-14);
}

#[test]
fn precision_rounds_the_output() {
    let dir = tempfile::tempdir().unwrap();
    let v = json_of(&run(&["eval", "B", "--p", "3,0,0,3", "--precision", "3"], dir.path()));
    assert_eq!(num(&v["metadata"]["eigenvalues"][0]), 0.111);
}

#[test]
fn input_and_domain_errors_have_distinct_codes() {
    let dir = packets();
    let d = dir.path();
    for (args, code) in [
        (vec!["eval", "B", "--p", "1,0,x,1"], 2),
        (vec!["eval", "theta", "--p", "1,1,0,0"], 2),
        (vec!["eval", "theta", "--alpha", "spin:1", "--p", "1,1,0,0"], 2),
        (vec!["eval", "B", "--p", "1,0,0,2"], 3),
        (vec!["eval", "B", "--p", "-1,0,0,-1"], 3),
        (vec!["eval", "Jp", "--p", "0,0,0,0"], 3),
        (vec!["eval", "theta", "--alpha", "rot12:1", "--p", "2,0,0,-2"], 3),
        (vec!["verify", "nothing"], 2),
        (vec!["product", "krein", "tr.json", "missing.json"], 2),
        (vec!["product", "krein", "tr.json", "bad.json"], 2),
        (vec!["transform", "tr.json"], 2),
    ] {
        assert_eq!(run(&args, d).status.code(), Some(code), "{args:?}");
    }
}

#[test]
fn invalid_thread_counts_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(BIN)
        .args(["verify", "sl2c"])
        .current_dir(dir.path())
        .env("KREIN_PHOTON_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn empty_sampling_passes_with_warnings() {
    let dir = tempfile::tempdir().unwrap();
    let v = json_of(&run(&["verify", "sl2c", "--samples", "0"], dir.path()));
    assert_eq!(v["pass"], true);
    assert_eq!(
        v["warnings"].as_array().unwrap().len(),
        v["checks"].as_array().unwrap().len()
    );
}

#[test]
fn failing_checks_are_named() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["verify", "cone", "--tolerance-scale", "0"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("cone/multiplier_cocycle"), "{err}");
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], false);
}

#[test]
fn reports_go_to_the_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["verify", "krein", "--seed", "7", "--samples", "50", "--out", "r.json"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(v["suite"], "krein");
    assert_eq!(v["environment"]["seed"], 7);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["anchor"].as_str().is_some_and(|a| !a.is_empty())));
}

#[test]
fn transversal_self_product_is_positive_and_null_ray_vanishes() {
    let dir = packets();
    let q = ["--quadrature", "64,32,64"];
    let tr = json_of(&run(
        &[&["product", "krein", "tr.json", "tr.json"][..], &q].concat(),
        dir.path(),
    ));
    let (re, im) = (num(&tr["value"][0]), num(&tr["value"][1]));
    assert!(re > 0.0 && im.abs() < 1e-15 * re);
    let exact = 0.09943442851485189;
    assert!((re - exact).abs() < 1e-7 * exact);

    let null = json_of(&run(
        &[&["product", "krein", "null.json", "null.json"][..], &q].concat(),
        dir.path(),
    ));
    assert!(num(&null["value"][0]).abs() < 1e-14);

    let h = json_of(&run(
        &[&["product", "hilbert", "null.json", "null.json"][..], &q].concat(),
        dir.path(),
    ));
    assert!(num(&h["value"][0]) > 1.0);
}

#[test]
fn strict_mode_flags_coarse_rules_and_small_grids() {
    let dir = packets();
    let d = dir.path();
    let coarse = run(
        &[
            "product",
            "krein",
            "tr.json",
            "tr.json",
            "--quadrature",
            "64,32,16",
            "--strict",
        ],
        d,
    );
    assert_eq!(coarse.status.code(), Some(4));
    let v: Value = serde_json::from_slice(&coarse.stdout).unwrap();
    assert!(!v["warnings"].as_array().unwrap().is_empty());
    let fine = run(
        &[
            "product",
            "krein",
            "tr.json",
            "tr.json",
            "--quadrature",
            "64,64,128",
            "--strict",
        ],
        d,
    );
    assert_eq!(fine.status.code(), Some(0));
    let small = run(
        &[
            "product",
            "position-krein",
            "tr.json",
            "tr.json",
            "--half-width",
            "3",
            "--strict",
        ],
        d,
    );
    assert_eq!(small.status.code(), Some(4));
}

#[test]
fn cross_check_on_the_reference_packet() {
    let dir = packets();
    let v = json_of(&run(
        &[
            "product",
            "position-krein",
            "tr.json",
            "tr.json",
            "--time",
            "1.5",
            "--cross-check",
            "--strict",
        ],
        dir.path(),
    ));
    let cc = &v["cross_check"]["result"];
    assert!(num(&cc["discrepancy"]) < 1e-3);
    assert!(num(&cc["time_spread"]) < 1e-3);
    let pos = num(&v["value"][0]);
    let mom = num(&cc["momentum"][0]);
    assert!((pos - mom).abs() < 1e-3 * mom);
}

#[test]
fn transform_obeys_the_local_law() {
    let dir = packets();
    let v = json_of(&run(
        &[
            "transform",
            "tr.json",
            "--x",
            "0,2,2.8,0",
            "--x",
            "0.5,2.3,3.2,-0.2",
            "--alpha",
            "boost03:0.2*rot12:0.4",
            "--translate",
            "0.3,-0.1,0,0.2",
        ],
        dir.path(),
    ));
    assert_eq!(v["points"].as_array().unwrap().len(), 2);
    assert!(num(&v["local_law"]["relative"]) < 1e-6);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = run(&["verify", "transversal", "--seed", "5"], dir.path());
    let b = run(&["verify", "transversal", "--seed", "5"], dir.path());
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["verify", "transversal", "--seed", "6"], dir.path());
    assert_ne!(a.stdout, c.stdout);
}

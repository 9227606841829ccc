use std::process::{Command, Output};

use serde_json::Value;

fn kunneth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kunneth")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = kunneth(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn k3_dimension() {
    let r = report(&["dim", "--surface", "K3", "--v", "1,0,-3", "--epsilon", "2"]);
    assert_eq!(r["expected_dim"], 6);
}

#[test]
fn p2_obstruction() {
    let r = report(&["obstruction", "--surface", "P2", "--v", "1,0,-4"]);
    assert_eq!(r["n"], 1);
    assert_eq!(r["verdict"], "universal sheaf exists");
}

#[test]
fn unknown_surface_is_a_validation_error() {
    assert_eq!(kunneth(&["surface", "bogus"]).status.code(), Some(1));
    assert_eq!(kunneth(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(kunneth(&["dim", "--v", "1,0,0", "--epsilon", "3"]).status.code(), Some(1));
}

#[test]
fn surface_summary() {
    let r = report(&["surface", "Bl2(P2)"]);
    assert_eq!(r["surface"]["h2_rank"], 3);
    assert_eq!(r["surface"]["K2"], 7);
    assert_eq!(r["surface"]["chi_O"], "1");
}

#[test]
fn custom_spec_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f2.json");
    std::fs::write(
        &path,
        r#"{"name": "F2", "b1": 0, "intersection_form": [[-2, 1], [1, 0]],
            "canonical_class": [-2, -4], "euler_number": 4}"#,
    )
    .unwrap();
    let r = report(&["chi", "--surface", path.to_str().unwrap(), "--v", "1,0,0,0"]);
    assert_eq!(r["chi"], 1);
    std::fs::write(&path, "{not json").unwrap();
    assert_eq!(kunneth(&["surface", path.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn mukai_and_dual_basis() {
    let r = report(&["mukai", "--surface", "K3", "--v", "1,0,-1", "--w", "1,0,-1"]);
    assert_eq!(r["pairing"], 0);
    let r = report(&["dualbasis", "--surface", "P2"]);
    assert_eq!(r["check"], serde_json::json!([[1, 0, 0], [0, 1, 0], [0, 0, 1]]));
}

#[test]
fn hilbert_and_stability() {
    let r = report(&["hilbert", "--surface", "P2", "--v", "1,0,0", "--h", "1"]);
    assert_eq!(r["hilbert"]["coefficients"], serde_json::json!(["1", "3/2", "1/2"]));
    let r = report(&["stability", "--surface", "P2", "--v", "1,0,0", "--w", "1,0,-1", "--h", "1"]);
    assert_eq!(r["order"], "v ≻ w");
}

#[test]
fn diagonal_toy() {
    let r = report(&["diagonal", "--factors", "even:2,even:3", "--gram", "0,1;0,0", "--m", "1"]);
    assert_eq!(r["rendered"], "3*c_1(e1') + 2*c_1(e2)");
    let gens: Vec<&str> = r["generators"].as_array().unwrap().iter().map(|g| g["alpha"].as_str().unwrap()).collect();
    assert_eq!(gens, ["1", "c_1(e1')"]);
    let bad = kunneth(&["diagonal", "--factors", "even:1,odd", "--gram", "0,1;1,0", "--m", "1"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn blowup_report_reverifies() {
    let out = kunneth(&["blowup", "--surface", "P1xP1", "--steps", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dec.json");
    std::fs::write(&path, &out.stdout).unwrap();
    let r = report(&["verify", "--decomposition", path.to_str().unwrap()]);
    assert_eq!(r["dual"], true);
    assert_eq!(r["pairs"], 7);

    // dropping a pair breaks duality
    let mut v: Value = serde_json::from_slice(&out.stdout).unwrap();
    v["decomposition"]["pairs"].as_array_mut().unwrap().pop();
    std::fs::write(&path, serde_json::to_vec(&v).unwrap()).unwrap();
    assert_eq!(kunneth(&["verify", "--decomposition", path.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn spectral_report() {
    let r = report(&["spectral", "--genus", "2", "--delta", "1", "--v", "2,1,3,1/2", "--x", "1,2"]);
    assert_eq!(r["projection_formula"]["holds"], true);
    assert_eq!(r["chi_surface"], r["chi_curve"]);
}

#[test]
fn reports_are_deterministic() {
    let args = ["diagonal", "--factors", "even:1,odd,odd", "--gram", "1,0,0;0,0,1;0,-1,0", "--m", "2"];
    assert_eq!(kunneth(&args).stdout, kunneth(&args).stdout);
}

#[test]
fn single_verify_suite() {
    let r = report(&["verify", "--suite", "dims"]);
    assert_eq!(r["passed"], true);
    assert_eq!(r["results"].as_array().unwrap().len(), 1);
}

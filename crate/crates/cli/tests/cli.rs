use std::process::Command;

use serde_json::Value;

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn bwsynth(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_bwsynth")).args(args).output().expect("binary runs");
    let text = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("not JSON ({e}): {text}"));
    (out.status.code().unwrap(), v)
}

#[test]
fn synthesize_htilde() {
    let (code, v) = bwsynth(&["synthesize", "--in", &data("htilde.json")]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["verdict"], "affirmative");
    let p = &v["payload"];
    assert_eq!(p["k"], 1);
    assert!(p["j"].is_u64() && p["L"].is_object() && p["R"].is_object());
    assert!(v.get("failure_reason").is_none());
}

#[test]
fn synthesize_with_oracle() {
    let (code, v) = bwsynth(&["synthesize", "--in", &data("cnot.json"), "--oracle"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["payload"]["oracle"]["agree"], true);
    assert_eq!(v["payload"]["oracle"]["stabilizers"], 16);
}

#[test]
fn t_gate_fails_integrality() {
    let (code, v) = bwsynth(&["check-unitary", "--in", &data("tgate.json")]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], "negative");
    assert_eq!(v["failure_reason"], "integrality");
    assert!(v.get("payload").is_none());
    let (code, _) = bwsynth(&["synthesize", "--in", &data("tgate.json")]);
    assert_eq!(code, 1);
}

#[test]
fn projectors() {
    let (code, v) = bwsynth(&["check-unitary", "--in", &data("zero_projector.json")]);
    assert_eq!(code, 1);
    assert!(v["failure_reason"].as_str().unwrap().starts_with("trace"));
    let (code, v) = bwsynth(&["synthesize", "--in", &data("scaled_projector.json")]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["payload"]["k"], 0);
}

#[test]
fn m_override() {
    let (code, v) = bwsynth(&["check-unitary", "--in", &data("htilde.json"), "--m", "3"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["payload"]["m"], 3);
    let (code, _) = bwsynth(&["synthesize", "--in", &data("tgate.json"), "--m", "2"]);
    assert_eq!(code, 2);
}

#[test]
fn group_orders() {
    let (code, v) = bwsynth(&["group-order", "--group", "clifford", "--n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["order"], 11520);
    let (code, v) = bwsynth(&["group-order", "--group", "qutrit", "--n", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["order"], 216);
    assert_eq!(v["payload"]["center_order"], 6);
    let (code, v) = bwsynth(&["group-order", "--group", "clifford", "--n", "2", "--cap", "100"]);
    assert_eq!(code, 2);
    assert!(v["failure_reason"].as_str().unwrap().contains("cap"));
    let (code, _) = bwsynth(&["group-order", "--group", "octonion", "--n", "1"]);
    assert_eq!(code, 2);
}

#[test]
fn states() {
    let (code, v) = bwsynth(&["check-state", "--in", &data("plus_state.json")]);
    assert_eq!(code, 0, "{v}");
    assert!(v["payload"]["circuit"]["gates"].is_array());
    let (code, _) = bwsynth(&["check-state", "--in", &data("unnormalized_plus.json")]);
    assert_eq!(code, 1);
    let (code, _) = bwsynth(&["check-state", "--in", &data("qutrit_state.json")]);
    assert_eq!(code, 1);
}

#[test]
fn choi_and_lattice_membership() {
    let (code, v) = bwsynth(&["choi", "--in", &data("htilde.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["state"]["rows"], 4);
    let (code, v) = bwsynth(&["lattice-member", "--in", &data("unnormalized_plus.json")]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["payload"]["norm"], "2");
    let (code, v) = bwsynth(&["lattice-member", "--in", &data("plus_state.json")]);
    assert_eq!(code, 1);
    assert_eq!(v["failure_reason"], "in the dual lattice only");
}

#[test]
fn minimal_vectors() {
    let (code, v) = bwsynth(&["minvec", "--n", "1", "--m", "3", "--oracle"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["payload"]["count"], 48);
    assert_eq!(v["payload"]["oracle"]["agree"], true);
    assert_eq!(v["payload"]["minimum"], "4");
}

#[test]
fn beyond_membership_and_orbits() {
    let (code, _) = bwsynth(&["beyond-member", "--group", "real-clifford-1", "--in", &data("hadamard_real.json")]);
    assert_eq!(code, 0);
    let (code, v) = bwsynth(&["beyond-member", "--group", "real-clifford-1", "--in", &data("s_gate.json")]);
    assert_eq!(code, 1);
    assert_eq!(v["failure_reason"], "not in field");
    let (code, v) = bwsynth(&["orbit-lattice", "--group", "clifford-1"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["equals_basis_change"], true);
    assert_eq!(v["payload"]["lattice"]["rank"], 4);
}

#[test]
fn malformed_input() {
    let (code, v) = bwsynth(&["synthesize", "--in", &data("bad_arity.json")]);
    assert_eq!(code, 2);
    assert_eq!(v["verdict"], "error");
    assert!(v["failure_reason"].as_str().unwrap().contains("entries[1]"));
    let (code, v) = bwsynth(&["synthesize", "--in", &data("missing.json")]);
    assert_eq!(code, 2);
    assert!(v["failure_reason"].is_string());
    let (code, v) = bwsynth(&["frobnicate"]);
    assert_eq!(code, 2);
    assert_eq!(v["verdict"], "error");
}

#[test]
fn reruns_are_identical() {
    let args = ["synthesize", "--in", &data("cnot.json")];
    let a = bwsynth(&args);
    let b = bwsynth(&args);
    assert_eq!(a, b);
    assert_eq!(a.1["command"][0], "synthesize");
}

use bwsynth_web::{group_order_of, minimal_vectors, synthesize};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

const HTILDE: &str = r#"{"conductor":4,"rows":2,"cols":2,"entries":[
    ["1/2","-1/2"],["1/2","-1/2"],["1/2","-1/2"],["-1/2","1/2"]]}"#;

const T_GATE: &str = r#"{"conductor":8,"rows":2,"cols":2,"entries":[
    ["1","0","0","0"],["0","0","0","0"],["0","0","0","0"],["0","1","0","0"]]}"#;

#[test]
fn synthesizes_htilde() {
    let v = parse(synthesize(HTILDE));
    assert_eq!(v["ok"], true, "{v}");
    assert_eq!(v["stabilizer"], true);
    assert_eq!(v["form"]["k"], 1);
}

#[test]
fn rejects_t_and_garbage() {
    let v = parse(synthesize(T_GATE));
    assert_eq!(v["ok"], true);
    assert_eq!(v["stabilizer"], false);
    assert!(v["reason"].is_string());
    let v = parse(synthesize("{not json"));
    assert_eq!(v["ok"], false);
    assert!(v["error"].is_string());
}

#[test]
fn minimal_vector_counts() {
    for (n, m, count) in [(1, 2, 24), (1, 3, 48), (2, 2, 240)] {
        let v = parse(minimal_vectors(n, m));
        assert_eq!(v["count"], count, "n={n} m={m}");
    }
    let v = parse(minimal_vectors(4, 2));
    assert_eq!(v["ok"], false);
}

#[test]
fn group_orders() {
    let v = parse(group_order_of("clifford", 2));
    assert_eq!(v["order"], 11520, "{v}");
    let v = parse(group_order_of("qutrit", 1));
    assert_eq!(v["order"], 216);
    assert_eq!(v["center_order"], 6);
    let v = parse(group_order_of("clifford", 3));
    assert_eq!(v["ok"], false);
    assert!(v["error"].as_str().unwrap().contains("cap"), "{v}");
}

//! Browser bindings. Every function returns a JSON string of the form
//! `{"ok": true, ...}` or `{"ok": false, "error": "..."}`.

use bwsynth::barneswall::{enumerate_minimal_vectors, BwLattice};
use bwsynth::beyond::{builtin, group_order};
use bwsynth::io::MatrixFile;
use bwsynth::synth::{qubit_counts, recognize};
use bwsynth::Error;
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

/// Largest lattice the page will enumerate; 2 qubits over Q(ζ_16) already has 4320 vectors.
pub const MAX_QUBITS: u32 = 2;
pub const MAX_M: u32 = 4;
/// BFS cap for group orders in the browser.
pub const GROUP_CAP: usize = 200_000;

fn finish(r: Result<Value, String>) -> String {
    match r {
        Ok(mut v) => {
            v["ok"] = json!(true);
            v.to_string()
        }
        Err(e) => json!({ "ok": false, "error": e }).to_string(),
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

/// Recognizes a post-selected stabilizer operator given in the matrix JSON encoding.
#[wasm_bindgen]
pub fn synthesize(matrix_json: &str) -> String {
    finish((|| {
        let a = MatrixFile::parse(matrix_json).and_then(|f| f.to_matrix()).map_err(err)?;
        let (n_in, n_out) = qubit_counts(&a).map_err(err)?;
        match recognize(&a, n_in, n_out, None) {
            Ok(form) => Ok(json!({ "stabilizer": true, "n_in": n_in, "n_out": n_out, "form": form })),
            Err(Error::NotStabilizerOperator(r)) => Ok(json!({ "stabilizer": false, "reason": r })),
            Err(Error::NotDyadic) => {
                Ok(json!({ "stabilizer": false, "reason": "not in a dyadic cyclotomic field" }))
            }
            Err(e) => Err(err(e)),
        }
    })())
}

/// Minimal vectors of the Barnes-Wall lattice on `n` qubits over Q(ζ_{2^m}).
#[wasm_bindgen]
pub fn minimal_vectors(n: u32, m: u32) -> String {
    finish((|| {
        if n > MAX_QUBITS || m > MAX_M {
            return Err(format!("the demo is limited to n <= {MAX_QUBITS} and m <= {MAX_M}"));
        }
        let lat = BwLattice::new(n as usize, m).map_err(err)?;
        let set = enumerate_minimal_vectors(&lat, MAX_QUBITS as usize).map_err(err)?;
        let vectors: Vec<Value> = set
            .values()
            .take(64)
            .map(|v| json!(v.entries().iter().map(|c| c.to_string()).collect::<Vec<_>>()))
            .collect();
        Ok(json!({
            "n": n,
            "m": m,
            "minimum": lat.minimum().to_string(),
            "count": set.len(),
            "sample": vectors,
        }))
    })())
}

/// Order of a builtin group such as `("clifford", 2)` or `("qutrit", 1)`.
#[wasm_bindgen]
pub fn group_order_of(group: &str, n: u32) -> String {
    finish((|| {
        let b = builtin(&format!("{group}-{n}")).map_err(err)?;
        let o = group_order(&b.group, GROUP_CAP).map_err(err)?;
        Ok(json!({
            "group": b.group.name,
            "order": o.mod_center,
            "center_order": o.center_order,
            "full_order": o.full,
        }))
    })())
}

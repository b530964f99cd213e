//! Regenerates the example inputs under `fixtures/`.
//!
//! ```text
//! cargo run --release -p odh-core --example derive_fixtures -- fixtures
//! ```

use std::fs;
use std::path::Path;

use odh_core::contraction::{ContractionData, ContractionIdeal};
use odh_core::hyperterm::{minimal_telescoper, ProperTerm};
use odh_core::{parse_poly, AlgebraKind, Budget, OrePoly, PolyOp, Shape};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

const SEED: u64 = 20_170_302;

fn write(dir: &Path, name: &str, value: &serde_json::Value) {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    fs::write(dir.join(name), s).expect("writable fixture directory");
}

fn op_json(op: &PolyOp) -> serde_json::Value {
    let coeffs: Vec<String> = op.coeffs().iter().map(ToString::to_string).collect();
    json!({ "kind": op.kind(), "coeffs": coeffs })
}

fn main() {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "fixtures".into());
    let dir = Path::new(&dir);
    let budget = Budget::unlimited();

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let ops: Vec<PolyOp> = [Shape::new(2, 1, 1), Shape::new(1, 2, 1)]
        .into_iter()
        .map(|s| OrePoly::random(AlgebraKind::DiffX, s, 9, &mut rng))
        .collect();
    write(dir, "ex32.json", &json!({ "ops": ops.iter().map(op_json).collect::<Vec<_>>() }));

    let term = ProperTerm::from_json(&fs::read_to_string(dir.join("ex46.json")).expect("ex46.json")).expect("valid term");
    let l = minimal_telescoper(&term, 2, 6, &budget).expect("telescoper").l;
    let ideal = ContractionIdeal::from_poly_op(&l, 3).expect("ideal");
    let lc = parse_poly("6*x^2 + 6*x*y^2 + 6*x*y + 6*x + y^4 + 4*y^3 + 4*y^2 + 3*y").expect("polynomial");
    let l1 = ideal.shape_search_with_leading(3, 8, 8, &lc, &budget).expect("search").expect("element of shape (3, 8, 8)");
    let data = ContractionData::from_elements(l, &[l1]).expect("cofactor");
    let witnesses: Vec<_> = data
        .witnesses
        .iter()
        .map(|w| json!({ "L": op_json(&w.l), "p": w.p.to_string(), "P": op_json(&w.big_p) }))
        .collect();
    write(dir, "ex54.json", &json!({ "L": op_json(&data.l), "witnesses": witnesses }));
}

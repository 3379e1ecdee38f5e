//! Regenerates the golden labeled-polyhedron documents under `figures/`.
//!
//! Usage: `cargo run -p fcpoly-core --example regen_figures -- [out_dir]`

use fcpoly_core::factorization::{labeled_polytope_json, TargetMap};
use fcpoly_core::word::{Bidegree, OpWord};

fn main() {
    let out_dir = std::env::args().nth(1).unwrap_or_else(|| "figures".to_string());
    let cases = [
        ("fig3.json", "d_0 d_1 s^0 s^1", Bidegree::new(2, 2)),
        ("fig4.json", "d_0 d_1 d_2 s^0", Bidegree::new(1, 3)),
    ];
    for (file, text, source) in cases {
        let psi = TargetMap::from_word(&OpWord::parse(text, source).expect("parse"))
            .expect("canonical");
        let json = labeled_polytope_json(&psi).expect("labeled polyhedron");
        let path = format!("{out_dir}/{file}");
        std::fs::write(&path, json).expect("write");
        println!("wrote {path}");
    }
}

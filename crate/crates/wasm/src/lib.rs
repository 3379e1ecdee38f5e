//! wasm-bindgen surface for the browser demo: word normalization, quotient
//! polyhedron skeletons with layout coordinates, and labeled factorization
//! polyhedra. Each call returns a JSON string for the page to render.
//!
//! The `*_impl` functions carry the logic and compile on any target; the
//! exported wrappers only translate errors into `JsValue`.

use fcpoly_core::factorization::{label_polytope, TargetMap};
use fcpoly_core::polytope::{
    class_coordinates_3d, euler_boundary, f_vector, fc_polytope, permutohedron, CellComplex,
};
use fcpoly_core::word::{Bidegree, LetterKind, OpWord};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Normalizes a word in compact syntax from the given source bidegree.
/// Mixed face/codegeneracy words go to the canonical factorization, purely
/// simplicial words to the degeneracies-then-faces form.
#[wasm_bindgen]
pub fn normalize_word(text: &str, cosimp: u32, simp: u32) -> Result<String, JsValue> {
    normalize_word_impl(text, cosimp, simp).map_err(|e| JsValue::from_str(&e))
}

/// 1-skeleton of the quotient polyhedron (or the permutohedron when
/// `n_codegens + 1 == n_letters`), with layout coordinates, boundary
/// f-vector, and Euler characteristic.
#[wasm_bindgen]
pub fn polytope_graph(n_letters: u32, n_codegens: u32) -> Result<String, JsValue> {
    polytope_graph_impl(n_letters, n_codegens).map_err(|e| JsValue::from_str(&e))
}

/// Labeled polyhedron of a composite face-codegeneracy map: every node
/// carries its factorization class as a list of words.
#[wasm_bindgen]
pub fn labeled_graph(psi: &str, cosimp: u32, simp: u32) -> Result<String, JsValue> {
    labeled_graph_impl(psi, cosimp, simp).map_err(|e| JsValue::from_str(&e))
}

pub fn normalize_word_impl(text: &str, cosimp: u32, simp: u32) -> Result<String, String> {
    let word =
        OpWord::parse(text, Bidegree::new(cosimp, simp)).map_err(|e| e.to_string())?;
    word.validate().map_err(|e| e.to_string())?;
    let simplicial = word.letters.iter().all(|l| l.kind.is_simplicial());
    let has_degen = word.letters.iter().any(|l| l.kind == LetterKind::SimpDegen);
    if simplicial && has_degen {
        Ok(word.simp_normalize().map_err(|e| e.to_string())?.to_string())
    } else {
        Ok(word.normalize().map_err(|e| e.to_string())?.to_string())
    }
}

/// Oblique 2D projection of the class barycenters.
fn layout(complex: &CellComplex) -> Vec<(f64, f64)> {
    class_coordinates_3d(complex)
        .into_iter()
        .map(|c| (c[0] + 0.38 * c[2], c[1] + 0.26 * c[2]))
        .collect()
}

fn graph_json(complex: &CellComplex, labels: Option<Vec<Vec<String>>>) -> String {
    let coords = layout(complex);
    let nodes: Vec<serde_json::Value> = complex
        .classes
        .iter()
        .enumerate()
        .map(|(i, class)| {
            let label = match &labels {
                Some(l) => l[i].clone(),
                None => vec![class.repr.to_string()],
            };
            json!({
                "id": i,
                "label": label,
                "size": class.members.len(),
                "x": coords[i].0,
                "y": coords[i].1,
            })
        })
        .collect();
    let edges: Vec<serde_json::Value> =
        complex.skeleton_edges().iter().map(|&(a, b)| json!([a, b])).collect();
    let euler = if complex.n_codegens >= 1 { euler_boundary(complex).ok() } else { None };
    json!({
        "N": complex.n_letters,
        "n": complex.n_codegens,
        "nodes": nodes,
        "edges": edges,
        "f_vector": f_vector(complex, false),
        "euler": euler,
    })
    .to_string()
}

pub fn polytope_graph_impl(n_letters: u32, n_codegens: u32) -> Result<String, String> {
    let complex = if n_codegens + 1 == n_letters {
        permutohedron(n_letters).map_err(|e| e.to_string())?
    } else {
        fc_polytope(n_letters, n_codegens).map_err(|e| e.to_string())?
    };
    Ok(graph_json(&complex, None))
}

pub fn labeled_graph_impl(psi: &str, cosimp: u32, simp: u32) -> Result<String, String> {
    let word =
        OpWord::parse(psi, Bidegree::new(cosimp, simp)).map_err(|e| e.to_string())?;
    let target = TargetMap::from_word(&word).map_err(|e| e.to_string())?;
    let labeled = label_polytope(&target).map_err(|e| e.to_string())?;
    let labels: Vec<Vec<String>> = labeled
        .labels
        .iter()
        .map(|c| c.members.iter().map(|w| w.to_string()).collect())
        .collect();
    Ok(graph_json(&labeled.complex, Some(labels)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_binding() {
        assert_eq!(normalize_word_impl("s^0 d_0 s^1 d_1", 2, 2).unwrap(), "d_0 d_1 s^0 s^1");
        assert_eq!(normalize_word_impl("d_2 s_0", 0, 2).unwrap(), "s_0 d_1");
        assert!(normalize_word_impl("d_9", 0, 1).is_err());
    }

    #[test]
    fn graph_bindings() {
        let v: serde_json::Value =
            serde_json::from_str(&polytope_graph_impl(4, 1).unwrap()).unwrap();
        assert_eq!(v["nodes"].as_array().unwrap().len(), 8);
        assert_eq!(v["edges"].as_array().unwrap().len(), 12);
        assert_eq!(v["euler"], 2);

        let v: serde_json::Value =
            serde_json::from_str(&labeled_graph_impl("d_0 d_1 s^0 s^1", 2, 2).unwrap()).unwrap();
        assert_eq!(v["nodes"].as_array().unwrap().len(), 18);
        let doubled = v["nodes"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|n| n["label"].as_array().unwrap().len() == 2)
            .count();
        assert_eq!(doubled, 6);
    }
}

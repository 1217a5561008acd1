//! Small committed graphs used by tests, examples and the CLI docs.
//!
//! The JSON sources live in the repository's `fixtures/` directory.

use crate::graph::json::load_document;
use crate::graph::{DirectedGraph, VertexSet};

pub const G1_JSON: &str = include_str!("../../../fixtures/g1.json");
pub const G2_JSON: &str = include_str!("../../../fixtures/g2.json");
pub const QUALIFICATIONS_JSON: &str = include_str!("../../../fixtures/qualifications.json");
pub const TWO_FEASIBLE_JSON: &str = include_str!("../../../fixtures/two_feasible.json");
pub const LEVEL_SPLIT_JSON: &str = include_str!("../../../fixtures/level_split.json");

/// Loads a fixture document together with its planted source and target.
pub fn load(text: &str) -> (DirectedGraph, VertexSet, VertexSet) {
    let doc = load_document(text).expect("fixture parses");
    let source = doc.source.expect("fixture has a source");
    let target = doc.target.expect("fixture has a target");
    let g = doc.graph.into_simple();
    let s = g.vertex_set(&source).expect("source ids exist");
    let t = g.vertex_set(&target).expect("target ids exist");
    (g, s, t)
}

/// Two blue sources funnel through red vertices into a single green target.
pub fn g1() -> (DirectedGraph, VertexSet, VertexSet) {
    load(G1_JSON)
}

/// The only exact length-3 program is red·green·yellow, even though one of
/// the green vertices has no way forward.
pub fn g2() -> (DirectedGraph, VertexSet, VertexSet) {
    load(G2_JSON)
}

pub fn qualifications() -> (DirectedGraph, VertexSet, VertexSet) {
    load(QUALIFICATIONS_JSON)
}

pub fn two_feasible() -> (DirectedGraph, VertexSet, VertexSet) {
    load(TWO_FEASIBLE_JSON)
}

pub fn level_split() -> (DirectedGraph, VertexSet, VertexSet) {
    load(LEVEL_SPLIT_JSON)
}

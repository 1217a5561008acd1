use std::fmt::Write;

use crate::graph::digraph::DirectedGraph;
use crate::graph::vertex_set::VertexSet;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Renders `g` as one Graphviz digraph.
///
/// The colour feature becomes `fillcolor`, source vertices are double
/// circles, target vertices double octagons. Each entry of `marks` is a
/// labelled vertex set (typically the endpoint sets of a trace); marked
/// vertices get a bold outline and an `xlabel` listing their marks.
pub fn to_dot(
    g: &DirectedGraph,
    source: Option<&VertexSet>,
    target: Option<&VertexSet>,
    marks: &[(String, VertexSet)],
) -> String {
    let mut out = String::from("digraph G {\n  node [style=filled, fillcolor=white];\n");
    for v in 0..g.vertex_count() {
        let mut attrs = Vec::new();
        if let Some(name) = g.color_of(v).and_then(|c| g.color_name(c)) {
            attrs.push(format!("fillcolor={}", quote(name)));
        }
        let in_s = source.is_some_and(|s| s.contains(v));
        let in_t = target.is_some_and(|t| t.contains(v));
        match (in_s, in_t) {
            (true, true) => attrs.push("shape=doubleoctagon, peripheries=3".into()),
            (false, true) => attrs.push("shape=doubleoctagon".into()),
            (true, false) => attrs.push("shape=doublecircle".into()),
            (false, false) => {}
        }
        let labels: Vec<&str> = marks
            .iter()
            .filter(|(_, set)| set.contains(v))
            .map(|(label, _)| label.as_str())
            .collect();
        if !labels.is_empty() {
            attrs.push(format!("xlabel={}, penwidth=3", quote(&labels.join(","))));
        }
        let _ = write!(out, "  {}", quote(g.name(v)));
        if !attrs.is_empty() {
            let _ = write!(out, " [{}]", attrs.join(", "));
        }
        out.push_str(";\n");
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "  {} -> {};", quote(g.name(u)), quote(g.name(v)));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn g1_rendering() {
        let (g, s, t) = fixtures::g1();
        let e1 = g.vertex_set(&["a", "b"]).unwrap();
        let dot = to_dot(&g, Some(&s), Some(&t), &[("E1".into(), e1)]);
        assert!(dot.starts_with("digraph G {"));
        assert!(dot.contains("\"s1\" [fillcolor=\"blue\", shape=doublecircle];"));
        assert!(dot.contains("\"t\" [fillcolor=\"green\", shape=doubleoctagon];"));
        assert!(dot.contains("\"a\" [fillcolor=\"red\", xlabel=\"E1\", penwidth=3];"));
        assert!(dot.contains("\"a\" -> \"c\";"));
        assert_eq!(dot.matches("->").count(), 5);
    }

    #[test]
    fn names_are_escaped() {
        assert_eq!(quote("a\"b"), "\"a\\\"b\"");
    }
}

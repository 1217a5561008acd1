use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::digraph::{DirectedGraph, GraphBuilder};
use crate::graph::schema::{FeatureSchema, FeatureValue};
use crate::graph::vertex_set::VertexId;

#[derive(Debug, Clone)]
pub struct MultiEdge {
    pub src: VertexId,
    pub dst: VertexId,
    pub features: Option<Vec<FeatureValue>>,
}

/// Directed multigraph whose edges may carry feature vectors.
#[derive(Debug, Clone)]
pub struct MultiGraph {
    schema: FeatureSchema,
    names: Vec<String>,
    index: HashMap<String, VertexId>,
    features: Vec<Vec<FeatureValue>>,
    edges: Vec<MultiEdge>,
}

impl MultiGraph {
    pub fn new(schema: FeatureSchema) -> Self {
        Self {
            schema,
            names: Vec::new(),
            index: HashMap::new(),
            features: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn schema(&self) -> &FeatureSchema {
        &self.schema
    }

    pub fn schema_mut(&mut self) -> &mut FeatureSchema {
        &mut self.schema
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.index.get(name).copied()
    }

    pub fn features(&self, v: VertexId) -> &[FeatureValue] {
        &self.features[v]
    }

    pub fn edges(&self) -> &[MultiEdge] {
        &self.edges
    }

    pub fn add_vertex(&mut self, name: &str, features: Vec<FeatureValue>) -> Result<VertexId> {
        if self.index.contains_key(name) {
            return Err(Error::DuplicateVertex {
                location: format!("vertex `{name}`"),
                name: name.to_owned(),
            });
        }
        if !self.schema.conforms(&features) {
            return Err(Error::Malformed {
                location: format!("vertex `{name}`"),
                message: "feature vector does not conform to the schema".into(),
            });
        }
        let id = self.names.len();
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), id);
        self.features.push(features);
        Ok(id)
    }

    pub fn add_edge(
        &mut self,
        src: VertexId,
        dst: VertexId,
        features: Option<Vec<FeatureValue>>,
    ) -> Result<()> {
        if src >= self.names.len() || dst >= self.names.len() {
            return Err(Error::Precondition(format!("edge {src}->{dst} has no endpoint")));
        }
        if let Some(f) = &features {
            if !self.schema.conforms(f) {
                return Err(Error::Malformed {
                    location: format!("edge `{}` -> `{}`", self.names[src], self.names[dst]),
                    message: "edge feature vector does not conform to the schema".into(),
                });
            }
        }
        self.edges.push(MultiEdge { src, dst, features });
        Ok(())
    }

    /// Subdivides every edge `e = (u, v)` with a fresh vertex `x_e` that
    /// carries `e`'s features and is linked `u -> x_e -> v`.
    ///
    /// Original vertices keep their ids; the vertex for edge `i` gets id
    /// `|V| + i`. Featureless edges yield all-missing vertices.
    pub fn to_simple(&self) -> DirectedGraph {
        let n = self.names.len();
        let width = self.schema.len();
        let mut b = GraphBuilder::new(self.schema.clone());
        for (name, f) in self.names.iter().zip(&self.features) {
            b.add_vertex(name, f.clone()).expect("names are unique");
        }
        for (i, e) in self.edges.iter().enumerate() {
            let mut name = format!("{}->{}#{}", self.names[e.src], self.names[e.dst], i);
            while b.vertex(&name).is_some() || self.index.contains_key(&name) {
                name.push('\'');
            }
            let f = e
                .features
                .clone()
                .unwrap_or_else(|| vec![FeatureValue::Missing; width]);
            let x = b.add_vertex(&name, f).expect("fresh name");
            debug_assert_eq!(x, n + i);
            b.add_edge(e.src, x).expect("valid ids");
            b.add_edge(x, e.dst).expect("valid ids");
        }
        b.build()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::schema::FeatureKind;
    use crate::graph::vertex_set::VertexSet;
    use proptest::prelude::*;

    fn colour_schema() -> FeatureSchema {
        FeatureSchema::new()
            .with_dimension("color", FeatureKind::Categorical)
            .unwrap()
    }

    #[test]
    fn single_edge_becomes_path() {
        let mut m = MultiGraph::new(colour_schema());
        let u = m.add_vertex("u", vec![FeatureValue::Missing]).unwrap();
        let v = m.add_vertex("v", vec![FeatureValue::Missing]).unwrap();
        let red = m.schema_mut().intern(0, "red").unwrap();
        m.add_edge(u, v, Some(vec![red])).unwrap();
        let g = m.to_simple();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.successors(u), &[2]);
        assert_eq!(g.successors(2), &[v]);
        assert_eq!(g.color_name(g.color_of(2).unwrap()), Some("red"));
    }

    #[test]
    fn parallel_edges_get_distinct_vertices() {
        let mut m = MultiGraph::new(colour_schema());
        let u = m.add_vertex("u", vec![FeatureValue::Missing]).unwrap();
        let v = m.add_vertex("v", vec![FeatureValue::Missing]).unwrap();
        m.add_edge(u, v, None).unwrap();
        m.add_edge(u, v, None).unwrap();
        let g = m.to_simple();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 4);
        assert_ne!(g.name(2), g.name(3));
        assert_eq!(g.successors(u), &[2, 3]);
    }

    #[test]
    fn edgeless_graph_is_unchanged() {
        let mut m = MultiGraph::new(colour_schema());
        m.add_vertex("only", vec![FeatureValue::Missing]).unwrap();
        let g = m.to_simple();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.name(0), "only");
    }

    #[test]
    fn subdivision_name_avoids_collisions() {
        let mut m = MultiGraph::new(colour_schema());
        let u = m.add_vertex("u", vec![FeatureValue::Missing]).unwrap();
        m.add_vertex("u->u#0", vec![FeatureValue::Missing]).unwrap();
        m.add_edge(u, u, None).unwrap();
        let g = m.to_simple();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.name(2), "u->u#0'");
    }

    proptest! {
        #[test]
        fn walks_double_in_length(
            n in 1usize..7,
            edges in proptest::collection::vec((0usize..7, 0usize..7), 0..16),
            j in 0usize..4,
        ) {
            let mut m = MultiGraph::new(FeatureSchema::new());
            for i in 0..n {
                m.add_vertex(&format!("v{i}"), vec![]).unwrap();
            }
            for &(u, v) in &edges {
                m.add_edge(u % n, v % n, None).unwrap();
            }
            let g = m.to_simple();
            prop_assert_eq!(g.vertex_count(), n + m.edge_count());
            prop_assert_eq!(g.edge_count(), 2 * m.edge_count());
            for u in 0..n {
                // walk in the multigraph by j edges
                let mut reach = VertexSet::singleton(n, u);
                for _ in 0..j {
                    let mut next = VertexSet::empty(n);
                    for e in m.edges() {
                        if reach.contains(e.src) {
                            next.insert(e.dst);
                        }
                    }
                    reach = next;
                }
                let conv = g.iterated_out(&g.singleton(u), 2 * j);
                for v in 0..n {
                    prop_assert_eq!(reach.contains(v), conv.contains(v));
                }
            }
        }
    }
}

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::schema::{FeatureKind, FeatureSchema, FeatureValue};
use crate::graph::vertex_set::{VertexId, VertexSet};

/// A value of the designated colour dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Color(pub u32);

/// Simple directed graph with feature-labelled vertices.
///
/// Immutable once built. Adjacency lists are sorted and duplicate-free; the
/// in-lists are the exact transpose of the out-lists.
#[derive(Debug, Clone)]
pub struct DirectedGraph {
    schema: FeatureSchema,
    names: Vec<String>,
    index: HashMap<String, VertexId>,
    features: Vec<Vec<FeatureValue>>,
    out_adj: Vec<Vec<VertexId>>,
    in_adj: Vec<Vec<VertexId>>,
    edge_count: usize,
    color_dim: Option<usize>,
    colors: Vec<Option<Color>>,
    classes: Vec<u32>,
}

pub struct GraphBuilder {
    schema: FeatureSchema,
    names: Vec<String>,
    index: HashMap<String, VertexId>,
    features: Vec<Vec<FeatureValue>>,
    out_adj: Vec<Vec<VertexId>>,
}

impl GraphBuilder {
    pub fn new(schema: FeatureSchema) -> Self {
        Self {
            schema,
            names: Vec::new(),
            index: HashMap::new(),
            features: Vec::new(),
            out_adj: Vec::new(),
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

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.index.get(name).copied()
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
        self.out_adj.push(Vec::new());
        Ok(id)
    }

    /// Adds `src -> dst`; returns false if the edge already exists.
    pub fn add_edge(&mut self, src: VertexId, dst: VertexId) -> Result<bool> {
        let n = self.names.len();
        if src >= n || dst >= n {
            return Err(Error::Precondition(format!(
                "edge {src}->{dst} outside {n} vertices"
            )));
        }
        let list = &mut self.out_adj[src];
        match list.binary_search(&dst) {
            Ok(_) => Ok(false),
            Err(pos) => {
                list.insert(pos, dst);
                Ok(true)
            }
        }
    }

    pub fn build(self) -> DirectedGraph {
        let n = self.names.len();
        let mut in_adj = vec![Vec::new(); n];
        let mut edge_count = 0;
        for (u, outs) in self.out_adj.iter().enumerate() {
            for &v in outs {
                in_adj[v].push(u);
                edge_count += 1;
            }
        }
        // sources are visited in ascending order, so in-lists come out sorted
        let mut classes = Vec::with_capacity(n);
        let mut seen: HashMap<&[FeatureValue], u32> = HashMap::new();
        for f in &self.features {
            let next = seen.len() as u32;
            classes.push(*seen.entry(f.as_slice()).or_insert(next));
        }
        let mut g = DirectedGraph {
            schema: self.schema,
            names: self.names,
            index: self.index,
            features: self.features,
            out_adj: self.out_adj,
            in_adj,
            edge_count,
            color_dim: None,
            colors: vec![None; n],
            classes,
        };
        if let Some(dim) = g.schema.index_of("color") {
            if g.schema.dimensions()[dim].kind() == FeatureKind::Categorical {
                g.assign_color_dim(dim);
            }
        }
        g
    }
}

impl DirectedGraph {
    pub fn schema(&self) -> &FeatureSchema {
        &self.schema
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.index.get(name).copied()
    }

    pub fn features(&self, v: VertexId) -> &[FeatureValue] {
        &self.features[v]
    }

    /// Vertices share a class iff their feature vectors are identical.
    pub fn feature_class(&self, v: VertexId) -> u32 {
        self.classes[v]
    }

    pub fn successors(&self, v: VertexId) -> &[VertexId] {
        &self.out_adj[v]
    }

    pub fn predecessors(&self, v: VertexId) -> &[VertexId] {
        &self.in_adj[v]
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(u, outs)| outs.iter().map(move |&v| (u, v)))
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::empty(self.vertex_count())
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.vertex_count())
    }

    pub fn singleton(&self, v: VertexId) -> VertexSet {
        VertexSet::singleton(self.vertex_count(), v)
    }

    /// Resolves display names to a vertex set.
    pub fn vertex_set<S: AsRef<str>>(&self, names: &[S]) -> Result<VertexSet> {
        let mut set = self.empty_set();
        for name in names {
            let name = name.as_ref();
            let v = self
                .vertex(name)
                .ok_or_else(|| Error::UnknownVertex(name.to_owned()))?;
            set.insert(v);
        }
        Ok(set)
    }

    pub fn set_names(&self, set: &VertexSet) -> Vec<&str> {
        set.iter().map(|v| self.name(v)).collect()
    }

    // ---- colour designation ----

    fn assign_color_dim(&mut self, dim: usize) {
        self.color_dim = Some(dim);
        for (slot, f) in self.colors.iter_mut().zip(&self.features) {
            *slot = match f[dim] {
                FeatureValue::Category(c) => Some(Color(c)),
                _ => None,
            };
        }
    }

    /// Designates the categorical dimension `name` as the colour.
    pub fn set_color_dimension(&mut self, name: &str) -> Result<()> {
        let dim = self
            .schema
            .index_of(name)
            .ok_or_else(|| Error::UnknownFeature {
                location: "colour designation".into(),
                feature: name.to_owned(),
            })?;
        if self.schema.dimensions()[dim].kind() != FeatureKind::Categorical {
            return Err(Error::NotCategorical(name.to_owned()));
        }
        self.assign_color_dim(dim);
        Ok(())
    }

    pub fn color_dimension(&self) -> Option<usize> {
        self.color_dim
    }

    pub fn require_colors(&self) -> Result<usize> {
        self.color_dim.ok_or(Error::NoColorDimension)
    }

    /// Number of colours `k`: the size of the colour dimension's domain.
    pub fn color_count(&self) -> usize {
        self.color_dim
            .map(|d| self.schema.dimensions()[d].values().len())
            .unwrap_or(0)
    }

    pub fn palette(&self) -> impl Iterator<Item = Color> {
        (0..self.color_count() as u32).map(Color)
    }

    pub fn color_of(&self, v: VertexId) -> Option<Color> {
        self.colors[v]
    }

    pub fn color_name(&self, c: Color) -> Option<&str> {
        let dim = self.color_dim?;
        self.schema.dimensions()[dim].value_name(c.0)
    }

    pub fn color_by_name(&self, name: &str) -> Result<Color> {
        let dim = self.require_colors()?;
        self.schema.dimensions()[dim]
            .lookup(name)
            .map(Color)
            .ok_or_else(|| Error::UnknownColor(name.to_owned()))
    }

    /// Distinct colours present in `a`, ascending.
    pub fn colors_in(&self, a: &VertexSet) -> Vec<Color> {
        let mut seen = vec![false; self.color_count()];
        for v in a {
            if let Some(c) = self.colors[v] {
                seen[c.0 as usize] = true;
            }
        }
        seen.iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(i, _)| Color(i as u32))
            .collect()
    }

    // ---- neighbourhood algebra ----

    pub fn out_neighbors(&self, a: &VertexSet) -> VertexSet {
        let mut out = self.empty_set();
        for u in a {
            for &v in &self.out_adj[u] {
                out.insert(v);
            }
        }
        out
    }

    pub fn in_neighbors(&self, a: &VertexSet) -> VertexSet {
        let mut out = self.empty_set();
        for u in a {
            for &v in &self.in_adj[u] {
                out.insert(v);
            }
        }
        out
    }

    pub fn out_of(&self, v: VertexId) -> VertexSet {
        VertexSet::from_ids(self.vertex_count(), self.out_adj[v].iter().copied())
    }

    pub fn iterated_out(&self, a: &VertexSet, n: usize) -> VertexSet {
        let mut cur = a.clone();
        for _ in 0..n {
            if cur.is_empty() {
                break;
            }
            cur = self.out_neighbors(&cur);
        }
        cur
    }

    pub fn iterated_in(&self, a: &VertexSet, n: usize) -> VertexSet {
        let mut cur = a.clone();
        for _ in 0..n {
            if cur.is_empty() {
                break;
            }
            cur = self.in_neighbors(&cur);
        }
        cur
    }

    /// `[A, N_o(A), N_o²(A), …]` up to and including `n` steps.
    pub fn forward_levels(&self, a: &VertexSet, n: usize) -> Vec<VertexSet> {
        let mut levels = Vec::with_capacity(n + 1);
        levels.push(a.clone());
        for i in 0..n {
            let next = self.out_neighbors(&levels[i]);
            levels.push(next);
        }
        levels
    }

    /// Members of `a` whose colour is `c`. Missing colours never match.
    pub fn select_by_color(&self, a: &VertexSet, c: Color) -> Result<VertexSet> {
        self.require_colors()?;
        Ok(self.filter_color(a, c))
    }

    pub(crate) fn filter_color(&self, a: &VertexSet, c: Color) -> VertexSet {
        let mut out = self.empty_set();
        for v in a {
            if self.colors[v] == Some(c) {
                out.insert(v);
            }
        }
        out
    }

    /// `C_c(N_o(A))`.
    pub fn color_image(&self, a: &VertexSet, c: Color) -> VertexSet {
        let mut out = self.empty_set();
        for u in a {
            for &v in &self.out_adj[u] {
                if self.colors[v] == Some(c) {
                    out.insert(v);
                }
            }
        }
        out
    }

    pub fn vertex_color_image(&self, u: VertexId, c: Color) -> VertexSet {
        let mut out = self.empty_set();
        for &v in &self.out_adj[u] {
            if self.colors[v] == Some(c) {
                out.insert(v);
            }
        }
        out
    }

    /// Every `ℓ ≤ max_len` with `T ⊆ N_oℓ(S)`, ascending.
    pub fn reachability_levels(
        &self,
        source: &VertexSet,
        target: &VertexSet,
        max_len: usize,
    ) -> Vec<usize> {
        let mut levels = Vec::new();
        let mut frontier = source.clone();
        for len in 0..=max_len {
            if target.is_subset(&frontier) {
                levels.push(len);
            }
            if len < max_len {
                frontier = self.out_neighbors(&frontier);
            }
        }
        levels
    }
}

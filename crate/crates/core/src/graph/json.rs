//! The `graph-json` document format and flat vertex-set files.
//!
//! ```json
//! {
//!   "schema":   [{"name": "color", "kind": "categorical"}],
//!   "vertices": [{"id": "s1", "features": {"color": "blue"}}],
//!   "edges":    [{"src": "s1", "dst": "a"}],
//!   "source":   ["s1"],
//!   "target":   ["t"]
//! }
//! ```
//!
//! `source`/`target` are optional fixture conveniences. A `null` or absent
//! feature is missing.

use std::collections::HashSet;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::graph::digraph::{DirectedGraph, GraphBuilder};
use crate::graph::multigraph::MultiGraph;
use crate::graph::schema::{FeatureKind, FeatureSchema, FeatureValue};
use crate::graph::vertex_set::VertexSet;

#[derive(Debug, Clone)]
pub enum LoadedGraph {
    Simple(DirectedGraph),
    Multi(MultiGraph),
}

impl LoadedGraph {
    /// Multigraphs are subdivided; simple graphs pass through.
    pub fn into_simple(self) -> DirectedGraph {
        match self {
            LoadedGraph::Simple(g) => g,
            LoadedGraph::Multi(m) => m.to_simple(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GraphDocument {
    pub graph: LoadedGraph,
    pub source: Option<Vec<String>>,
    pub target: Option<Vec<String>>,
}

pub fn load_graph(text: &str) -> Result<LoadedGraph> {
    Ok(load_document(text)?.graph)
}

/// Loads a document that must describe a simple graph: featureless edges
/// and no duplicates.
pub fn load_simple_graph(text: &str) -> Result<DirectedGraph> {
    let raw = RawDocument::parse(text)?;
    if let Some((i, _)) = raw.edges.iter().enumerate().find(|(_, e)| e.features.is_some()) {
        return Err(Error::Malformed {
            location: format!("edges[{i}]"),
            message: "edge features are not allowed in a simple graph".into(),
        });
    }
    let mut seen = HashSet::new();
    for (i, e) in raw.edges.iter().enumerate() {
        if !seen.insert((e.src.as_str(), e.dst.as_str())) {
            return Err(Error::DuplicateEdge {
                location: format!("edges[{i}]"),
                src: e.src.clone(),
                dst: e.dst.clone(),
            });
        }
    }
    match raw.build()?.graph {
        LoadedGraph::Simple(g) => Ok(g),
        LoadedGraph::Multi(m) => Ok(m.to_simple()),
    }
}

pub fn load_document(text: &str) -> Result<GraphDocument> {
    RawDocument::parse(text)?.build()
}

struct RawVertex {
    id: String,
    features: Option<Map<String, Value>>,
}

struct RawEdge {
    src: String,
    dst: String,
    features: Option<Map<String, Value>>,
}

struct RawDocument {
    schema: FeatureSchema,
    vertices: Vec<RawVertex>,
    edges: Vec<RawEdge>,
    source: Option<Vec<String>>,
    target: Option<Vec<String>>,
}

fn malformed(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Malformed {
        location: location.into(),
        message: message.into(),
    }
}

fn get_str(obj: &Map<String, Value>, key: &str, location: &str) -> Result<String> {
    match obj.get(key) {
        Some(Value::String(s)) => Ok(s.clone()),
        Some(_) => Err(malformed(format!("{location}.{key}"), "expected a string")),
        None => Err(malformed(location, format!("missing `{key}`"))),
    }
}

fn get_array<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a [Value]> {
    match obj.get(key) {
        Some(Value::Array(a)) => Ok(a),
        Some(_) => Err(malformed(key, "expected an array")),
        None => Err(malformed("document", format!("missing `{key}`"))),
    }
}

fn get_features(obj: &Map<String, Value>, location: &str) -> Result<Option<Map<String, Value>>> {
    match obj.get("features") {
        None | Some(Value::Null) => Ok(None),
        Some(Value::Object(m)) => Ok(Some(m.clone())),
        Some(_) => Err(malformed(format!("{location}.features"), "expected an object")),
    }
}

fn get_id_list(obj: &Map<String, Value>, key: &str) -> Result<Option<Vec<String>>> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::Array(a)) => a
            .iter()
            .enumerate()
            .map(|(i, v)| match v {
                Value::String(s) => Ok(s.clone()),
                _ => Err(malformed(format!("{key}[{i}]"), "expected a vertex id string")),
            })
            .collect::<Result<Vec<_>>>()
            .map(Some),
        Some(_) => Err(malformed(key, "expected an array of vertex ids")),
    }
}

fn check_keys(obj: &Map<String, Value>, allowed: &[&str], location: &str) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(malformed(location, format!("unexpected key `{k}`"))),
        None => Ok(()),
    }
}

impl RawDocument {
    fn parse(text: &str) -> Result<Self> {
        let root: Value = serde_json::from_str(text)?;
        let root = match root {
            Value::Object(m) => m,
            _ => return Err(malformed("document", "expected a JSON object")),
        };
        check_keys(
            &root,
            &["schema", "vertices", "edges", "source", "target"],
            "document",
        )?;

        let mut schema = FeatureSchema::new();
        for (i, d) in get_array(&root, "schema")?.iter().enumerate() {
            let location = format!("schema[{i}]");
            let d = d
                .as_object()
                .ok_or_else(|| malformed(&location, "expected an object"))?;
            check_keys(d, &["name", "kind"], &location)?;
            let name = get_str(d, "name", &location)?;
            let kind = match get_str(d, "kind", &location)?.as_str() {
                "categorical" => FeatureKind::Categorical,
                "ordered" => FeatureKind::Ordered,
                other => {
                    return Err(malformed(
                        format!("{location}.kind"),
                        format!("unknown kind `{other}`"),
                    ))
                }
            };
            schema.add_dimension(&name, kind).map_err(|_| {
                malformed(&location, format!("duplicate dimension `{name}`"))
            })?;
        }

        let mut vertices = Vec::new();
        for (i, v) in get_array(&root, "vertices")?.iter().enumerate() {
            let location = format!("vertices[{i}]");
            let v = v
                .as_object()
                .ok_or_else(|| malformed(&location, "expected an object"))?;
            check_keys(v, &["id", "features"], &location)?;
            vertices.push(RawVertex {
                id: get_str(v, "id", &location)?,
                features: get_features(v, &location)?,
            });
        }

        let mut edges = Vec::new();
        let raw_edges = match root.get("edges") {
            None => &[][..],
            Some(_) => get_array(&root, "edges")?,
        };
        for (i, e) in raw_edges.iter().enumerate() {
            let location = format!("edges[{i}]");
            let e = e
                .as_object()
                .ok_or_else(|| malformed(&location, "expected an object"))?;
            check_keys(e, &["src", "dst", "features"], &location)?;
            edges.push(RawEdge {
                src: get_str(e, "src", &location)?,
                dst: get_str(e, "dst", &location)?,
                features: get_features(e, &location)?,
            });
        }

        Ok(RawDocument {
            schema,
            vertices,
            edges,
            source: get_id_list(&root, "source")?,
            target: get_id_list(&root, "target")?,
        })
    }

    fn build(self) -> Result<GraphDocument> {
        let RawDocument {
            mut schema,
            vertices,
            edges,
            source,
            target,
        } = self;

        let mut vectors = Vec::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            let location = format!("vertices[{i}]");
            vectors.push(parse_vector(&mut schema, v.features.as_ref(), &location)?);
        }
        let mut edge_vectors = Vec::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            let location = format!("edges[{i}]");
            edge_vectors.push(match &e.features {
                Some(f) => Some(parse_vector(&mut schema, Some(f), &location)?),
                None => None,
            });
        }

        let mut multi = MultiGraph::new(schema);
        for (i, (v, f)) in vertices.iter().zip(vectors).enumerate() {
            multi.add_vertex(&v.id, f).map_err(|_| Error::DuplicateVertex {
                location: format!("vertices[{i}]"),
                name: v.id.clone(),
            })?;
        }
        let mut pairs = HashSet::new();
        let mut parallel = false;
        for (i, (e, f)) in edges.iter().zip(edge_vectors).enumerate() {
            let resolve = |name: &str| {
                multi.vertex(name).ok_or_else(|| Error::DanglingEdge {
                    location: format!("edges[{i}]"),
                    name: name.to_owned(),
                })
            };
            let (u, v) = (resolve(&e.src)?, resolve(&e.dst)?);
            parallel |= !pairs.insert((u, v));
            multi.add_edge(u, v, f)?;
        }

        for (key, list) in [("source", &source), ("target", &target)] {
            if let Some(ids) = list {
                if let Some((i, id)) = ids.iter().enumerate().find(|(_, id)| multi.vertex(id).is_none()) {
                    return Err(malformed(format!("{key}[{i}]"), format!("unknown vertex `{id}`")));
                }
            }
        }

        let featured = multi.edges().iter().any(|e| e.features.is_some());
        let graph = if featured || parallel {
            LoadedGraph::Multi(multi)
        } else {
            let mut b = GraphBuilder::new(multi.schema().clone());
            for v in 0..multi.vertex_count() {
                b.add_vertex(multi.name(v), multi.features(v).to_vec())?;
            }
            for e in multi.edges() {
                b.add_edge(e.src, e.dst)?;
            }
            LoadedGraph::Simple(b.build())
        };
        Ok(GraphDocument {
            graph,
            source,
            target,
        })
    }
}

fn parse_vector(
    schema: &mut FeatureSchema,
    features: Option<&Map<String, Value>>,
    location: &str,
) -> Result<Vec<FeatureValue>> {
    let mut out = vec![FeatureValue::Missing; schema.len()];
    if let Some(f) = features {
        for (name, raw) in f {
            let dim = schema.index_of(name).ok_or_else(|| Error::UnknownFeature {
                location: location.to_owned(),
                feature: name.clone(),
            })?;
            out[dim] = schema.parse_value(dim, raw, &format!("{location}.features.{name}"))?;
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct DimensionOut<'a> {
    name: &'a str,
    kind: &'static str,
}

#[derive(Serialize)]
struct VertexOut<'a> {
    id: &'a str,
    features: Map<String, Value>,
}

#[derive(Serialize)]
struct EdgeOut<'a> {
    src: &'a str,
    dst: &'a str,
}

#[derive(Serialize)]
struct DocumentOut<'a> {
    schema: Vec<DimensionOut<'a>>,
    vertices: Vec<VertexOut<'a>>,
    edges: Vec<EdgeOut<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    source: Option<Vec<&'a str>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    target: Option<Vec<&'a str>>,
}

/// Serialises a simple graph, optionally with planted source/target sets.
pub fn write_graph(
    g: &DirectedGraph,
    source: Option<&VertexSet>,
    target: Option<&VertexSet>,
) -> String {
    let schema = g.schema();
    let doc = DocumentOut {
        schema: schema
            .dimensions()
            .iter()
            .map(|d| DimensionOut {
                name: d.name(),
                kind: d.kind().as_str(),
            })
            .collect(),
        vertices: (0..g.vertex_count())
            .map(|v| VertexOut {
                id: g.name(v),
                features: g
                    .features(v)
                    .iter()
                    .enumerate()
                    .map(|(i, x)| (schema.dimensions()[i].name().to_owned(), schema.render(i, x)))
                    .collect(),
            })
            .collect(),
        edges: g
            .edges()
            .map(|(u, v)| EdgeOut {
                src: g.name(u),
                dst: g.name(v),
            })
            .collect(),
        source: source.map(|s| g.set_names(s)),
        target: target.map(|t| g.set_names(t)),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("serialisable");
    text.push('\n');
    text
}

/// Newline-separated vertex ids; blank lines and `#` comments are skipped.
pub fn parse_vertex_set(g: &DirectedGraph, text: &str) -> Result<VertexSet> {
    let ids: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    g.vertex_set(&ids)
}

pub fn format_vertex_set(g: &DirectedGraph, set: &VertexSet) -> String {
    set.iter().map(|v| format!("{}\n", g.name(v))).collect()
}

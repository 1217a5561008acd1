//! Feature schema, graph representation, neighbourhood algebra and file I/O.

pub mod digraph;
pub mod dot;
pub mod json;
pub mod multigraph;
pub mod schema;
pub mod vertex_set;

pub use digraph::{Color, DirectedGraph, GraphBuilder};
pub use json::{GraphDocument, LoadedGraph};
pub use multigraph::{MultiEdge, MultiGraph};
pub use schema::{Dimension, FeatureKind, FeatureSchema, FeatureValue};
pub use vertex_set::{VertexId, VertexSet};

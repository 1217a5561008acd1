//! Mining set-valued graph-walking programs.
//!
//! A colour program is a sequence of colours; run from a vertex set `S`, it
//! repeatedly moves to the out-neighbours carrying the next colour. A toset
//! program does the same with criteria over ordered and categorical features.
//! The miners enumerate every program of each length that carries `S` exactly
//! onto (or feasibly into) a target `T`; the oracle module holds brute-force
//! references to test them against.

pub mod error;
pub mod fixtures;
pub mod graph;
pub mod mining;
pub mod oracle;
pub mod report;
pub mod scp;
pub mod stp;
pub mod walk;

pub use error::{Error, Result};
pub use graph::{Color, DirectedGraph, FeatureKind, FeatureSchema, FeatureValue, VertexId, VertexSet};
pub use mining::{Fidelity, MiningConfig, MiningReport, Mode, SearchStats};
pub use scp::ColorProgram;
pub use stp::{Criterion, TosetProgram};
pub use walk::{Classification, EndpointTrace, PartialHalt, Verdict};

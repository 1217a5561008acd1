//! Brute-force reference miners and random instances.

pub mod brute;
pub mod generate;

use crate::error::Result;
use crate::graph::{DirectedGraph, VertexSet};
use crate::mining::{MiningReport, Mode};
use crate::scp::ColorProgram;

pub use brute::{
    brute_force_mine_scp, extract_walk, minimal_covers_bruteforce, walk_traces, OracleSets,
};
pub use generate::{random_instance, GeneratorConfig, Instance};

/// The oracle as a slow miner: one report per length, always exhausted.
pub fn oracle_reports(
    g: &DirectedGraph,
    source: &VertexSet,
    target: &VertexSet,
    mode: Mode,
    max_len: usize,
) -> Result<Vec<MiningReport<ColorProgram>>> {
    g.require_colors()?;
    crate::scp::vibe::check_endpoints(g, source, target)?;
    (0..=max_len)
        .map(|len| {
            let sets = brute_force_mine_scp(g, source, target, len)?;
            let mut report = MiningReport::empty(mode, len, true);
            report.programs = match mode {
                Mode::Exact => sets.exact,
                Mode::Feasible => sets.feasible,
            };
            report.stats.accepted = report.programs.len() as u64;
            Ok(report)
        })
        .collect()
}

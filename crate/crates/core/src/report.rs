//! JSON rendering of mining reports.

use serde_json::{json, Value};

use crate::graph::DirectedGraph;
use crate::mining::MiningReport;
use crate::scp::ColorProgram;
use crate::stp::TosetProgram;

/// A colour program as an array of colour names.
pub fn color_program_json(g: &DirectedGraph, p: &ColorProgram) -> Value {
    json!(p.names(g))
}

pub fn report_json<P>(engine: &str, report: &MiningReport<P>, render: impl Fn(&P) -> Value) -> Value {
    json!({
        "engine": engine,
        "mode": report.mode.name(),
        "length": report.length,
        "exhausted": report.exhausted,
        "programs": report.programs.iter().map(render).collect::<Vec<_>>(),
        "stats": report.stats,
    })
}

pub fn scp_report_json(engine: &str, g: &DirectedGraph, report: &MiningReport<ColorProgram>) -> Value {
    report_json(engine, report, |p| color_program_json(g, p))
}

pub fn stp_report_json(g: &DirectedGraph, report: &MiningReport<TosetProgram>) -> Value {
    report_json("stp", report, |p| p.to_json(g.schema()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::mining::MiningConfig;
    use crate::scp::mine_exact_scp;

    #[test]
    fn g1_report_shape() {
        let (g, s, t) = fixtures::g1();
        let reports = mine_exact_scp(&g, &s, &t, &MiningConfig::new(2)).unwrap();
        let v = scp_report_json("scp", &g, &reports[2]);
        assert_eq!(v["engine"], "scp");
        assert_eq!(v["mode"], "exact");
        assert_eq!(v["length"], 2);
        assert_eq!(v["exhausted"], true);
        assert_eq!(v["programs"], json!([["red", "green"]]));
        assert!(v["stats"]["triples_expanded"].is_u64());
    }
}

//! Simple toset programs: each step is a criterion over feature vectors.

pub mod bpf;
pub mod criterion;
pub mod tree;

use std::collections::HashSet;
use std::fmt;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, FeatureSchema, FeatureValue, VertexId, VertexSet};
use crate::walk::{self, Classification, EndpointTrace, StepRule};

pub use bpf::{mine_exact_stp, mine_feasible_stp, mine_stp, StpMiner};
pub use criterion::{Criterion, Op};
pub use tree::compute_criterion;

impl StepRule for Criterion {
    fn admits(&self, g: &DirectedGraph, v: VertexId) -> bool {
        self.eval(g.features(v))
    }
}

/// Validates `c` and evaluates it on one feature vector.
pub fn satisfies(schema: &FeatureSchema, features: &[FeatureValue], c: &Criterion) -> Result<bool> {
    c.validate(schema)?;
    if !schema.conforms(features) {
        return Err(Error::Precondition("feature vector does not fit the schema".into()));
    }
    Ok(c.eval(features))
}

/// Members of `a` whose features satisfy `c`.
pub fn select_by_criterion(g: &DirectedGraph, a: &VertexSet, c: &Criterion) -> Result<VertexSet> {
    c.validate(g.schema())?;
    Ok(walk::select(g, a, c))
}

/// No vertex of `include` shares its feature vector with one of `exclude`.
///
/// Both sides must lie in `N_o(A)` and be disjoint.
pub fn consistent(
    g: &DirectedGraph,
    a: &VertexSet,
    include: &VertexSet,
    exclude: &VertexSet,
) -> Result<bool> {
    let out = g.out_neighbors(a);
    if !include.is_subset(&out) || !exclude.is_subset(&out) {
        return Err(Error::Precondition("both sides must be out-neighbours of A".into()));
    }
    if include.intersects(exclude) {
        return Err(Error::Precondition("include and exclude sides overlap".into()));
    }
    Ok(classes_disjoint(g, include, exclude))
}

pub(crate) fn classes_disjoint(g: &DirectedGraph, include: &VertexSet, exclude: &VertexSet) -> bool {
    let classes: HashSet<u32> = include.iter().map(|v| g.feature_class(v)).collect();
    exclude.iter().all(|y| !classes.contains(&g.feature_class(y)))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TosetProgram(Vec<Criterion>);

impl TosetProgram {
    pub fn new(steps: Vec<Criterion>) -> Self {
        Self(steps)
    }

    pub fn epsilon() -> Self {
        Self(Vec::new())
    }

    pub fn steps(&self) -> &[Criterion] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn validate(&self, schema: &FeatureSchema) -> Result<()> {
        self.0.iter().try_for_each(|c| c.validate(schema))
    }

    pub fn to_json(&self, schema: &FeatureSchema) -> Value {
        Value::Array(self.0.iter().map(|c| c.to_json(schema)).collect())
    }

    pub fn from_json(schema: &FeatureSchema, v: &Value) -> Result<Self> {
        let items = v
            .as_array()
            .ok_or_else(|| Error::InvalidCriterion("a toset program is an array of criteria".into()))?;
        items
            .iter()
            .map(|c| Criterion::from_json(schema, c))
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    pub fn display<'a>(&'a self, schema: &'a FeatureSchema) -> impl fmt::Display + 'a {
        DisplayProgram { p: self, schema }
    }
}

struct DisplayProgram<'a> {
    p: &'a TosetProgram,
    schema: &'a FeatureSchema,
}

impl fmt::Display for DisplayProgram<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_empty() {
            return f.write_str("ε");
        }
        for (i, c) in self.p.steps().iter().enumerate() {
            if i > 0 {
                f.write_str(" · ")?;
            }
            write!(f, "[{}]", c.display(self.schema))?;
        }
        Ok(())
    }
}

pub fn simulate_stp(g: &DirectedGraph, source: &VertexSet, p: &TosetProgram) -> Result<EndpointTrace> {
    p.validate(g.schema())?;
    Ok(walk::simulate(g, source, p.steps()))
}

pub fn classify_stp(
    g: &DirectedGraph,
    source: &VertexSet,
    target: &VertexSet,
    p: &TosetProgram,
) -> Result<Classification> {
    p.validate(g.schema())?;
    Ok(walk::classify(g, source, target, p.steps()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::walk::Verdict;

    #[test]
    fn select_red_on_g1() {
        let (g, _, _) = fixtures::g1();
        let red = g.color_by_name("red").unwrap();
        let c = Criterion::atom(0, Op::Eq, FeatureValue::Category(red.0));
        let got = select_by_criterion(&g, &g.all_vertices(), &c).unwrap();
        assert_eq!(g.set_names(&got), ["a", "b"]);
        assert!(select_by_criterion(&g, &g.empty_set(), &c).unwrap().is_empty());
    }

    #[test]
    fn observed_values_select_everything() {
        let (g, _, _) = fixtures::g1();
        let all = g.all_vertices();
        let c = Criterion::Any(
            g.palette()
                .map(|k| Criterion::atom(0, Op::Eq, FeatureValue::Category(k.0)))
                .collect(),
        );
        assert_eq!(select_by_criterion(&g, &all, &c).unwrap(), all);
    }

    #[test]
    fn consistency() {
        let (g, s, _) = fixtures::g1();
        let a = g.vertex_set(&["a"]).unwrap();
        let b = g.vertex_set(&["b"]).unwrap();
        // a and b are both red: identical vectors
        assert!(!consistent(&g, &s, &a, &b).unwrap());
        assert!(consistent(&g, &s, &a, &g.empty_set()).unwrap());
        assert!(consistent(&g, &s, &a, &a).is_err());
        let t = g.vertex_set(&["t"]).unwrap();
        assert!(consistent(&g, &s, &t, &a).is_err());
    }

    #[test]
    fn level_split_programs() {
        let (g, s, t) = fixtures::level_split();
        let color = g.schema().index_of("color").unwrap();
        let level = g.schema().index_of("level").unwrap();
        let cat = |name: &str| FeatureValue::Category(g.color_by_name(name).unwrap().0);
        let exact = TosetProgram::new(vec![
            Criterion::All(vec![
                Criterion::atom(color, Op::Eq, cat("red")),
                Criterion::atom(level, Op::Le, FeatureValue::number(3.0).unwrap()),
            ]),
            Criterion::atom(color, Op::Eq, cat("green")),
        ]);
        assert_eq!(classify_stp(&g, &s, &t, &exact).unwrap().verdict, Verdict::Exact);
        let loose = TosetProgram::new(vec![
            Criterion::atom(color, Op::Eq, cat("red")),
            Criterion::atom(color, Op::Eq, cat("green")),
        ]);
        let cls = classify_stp(&g, &s, &t, &loose).unwrap();
        assert_eq!(cls.verdict, Verdict::Infeasible);
        assert!(t.is_subset(cls.trace.last()) && cls.trace.last() != &t);
        let json = exact.to_json(g.schema());
        assert_eq!(TosetProgram::from_json(g.schema(), &json).unwrap(), exact);
    }
}

//! Set-valued agent simulation shared by colour and toset programs.
//!
//! A program is a slice of step rules. Starting from `E⁰ = S`, each step
//! moves to the out-neighbours of the current endpoint set that the next rule
//! admits. Simulation is the polynomial verifier for mined programs: one pass
//! over the out-edges of the current set per instruction.

use crate::graph::{Color, DirectedGraph, VertexId, VertexSet};

/// Per-vertex instruction: does the agent proceed to `v`?
pub trait StepRule {
    fn admits(&self, g: &DirectedGraph, v: VertexId) -> bool;
}

impl StepRule for Color {
    fn admits(&self, g: &DirectedGraph, v: VertexId) -> bool {
        g.color_of(v) == Some(*self)
    }
}

impl<R: StepRule + ?Sized> StepRule for &R {
    fn admits(&self, g: &DirectedGraph, v: VertexId) -> bool {
        (**self).admits(g, v)
    }
}

/// Members of `a` admitted by `rule`.
pub fn select<R: StepRule>(g: &DirectedGraph, a: &VertexSet, rule: &R) -> VertexSet {
    let mut out = g.empty_set();
    for v in a {
        if rule.admits(g, v) {
            out.insert(v);
        }
    }
    out
}

/// One agent step: the admitted out-neighbours of `a`.
pub fn advance<R: StepRule>(g: &DirectedGraph, a: &VertexSet, rule: &R) -> VertexSet {
    let mut out = g.empty_set();
    for u in a {
        for &v in g.successors(u) {
            if !out.contains(v) && rule.admits(g, v) {
                out.insert(v);
            }
        }
    }
    out
}

/// Endpoint sets `E⁰ … Eⁿ` of one program run.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EndpointTrace {
    sets: Vec<VertexSet>,
}

impl EndpointTrace {
    pub fn sets(&self) -> &[VertexSet] {
        &self.sets
    }

    pub fn endpoint(&self, i: usize) -> &VertexSet {
        &self.sets[i]
    }

    /// `Eⁿ`.
    pub fn last(&self) -> &VertexSet {
        self.sets.last().expect("a trace always holds E⁰")
    }

    /// Number of steps, i.e. the program length.
    pub fn steps(&self) -> usize {
        self.sets.len() - 1
    }

    pub fn into_sets(self) -> Vec<VertexSet> {
        self.sets
    }
}

pub fn simulate<R: StepRule>(g: &DirectedGraph, source: &VertexSet, program: &[R]) -> EndpointTrace {
    let mut sets = Vec::with_capacity(program.len() + 1);
    sets.push(source.clone());
    for rule in program {
        let next = advance(g, sets.last().unwrap(), rule);
        sets.push(next);
    }
    EndpointTrace { sets }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// `Eⁿ = T`.
    Exact,
    /// `∅ ≠ Eⁿ ⊊ T`.
    Feasible,
    /// `Eⁿ` is nonempty but leaves `T`.
    Infeasible,
    /// `step` is the index of the first empty endpoint set.
    CompleteHalt { step: usize },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Exact => "exact",
            Verdict::Feasible => "feasible",
            Verdict::Infeasible => "infeasible",
            Verdict::CompleteHalt { .. } => "halt",
        }
    }
}

/// Vertices of `Eⁱ` with no out-neighbour admitted by instruction `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialHalt {
    pub step: usize,
    pub vertices: VertexSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub verdict: Verdict,
    pub partial_halts: Vec<PartialHalt>,
    pub trace: EndpointTrace,
}

impl Classification {
    pub fn is_exact(&self) -> bool {
        self.verdict == Verdict::Exact
    }

    /// Exact programs are feasible too.
    pub fn is_feasible(&self) -> bool {
        matches!(self.verdict, Verdict::Exact | Verdict::Feasible)
    }

    pub fn partially_halts(&self) -> bool {
        !self.partial_halts.is_empty()
    }
}

pub fn classify<R: StepRule>(
    g: &DirectedGraph,
    source: &VertexSet,
    target: &VertexSet,
    program: &[R],
) -> Classification {
    let trace = simulate(g, source, program);
    let last = trace.last();
    let verdict = if let Some(step) = trace.sets.iter().position(VertexSet::is_empty) {
        Verdict::CompleteHalt { step }
    } else if last == target {
        Verdict::Exact
    } else if last.is_subset(target) {
        Verdict::Feasible
    } else {
        Verdict::Infeasible
    };
    let mut partial_halts = Vec::new();
    for (i, rule) in program.iter().enumerate() {
        let mut stuck = g.empty_set();
        for v in trace.endpoint(i) {
            if !g.successors(v).iter().any(|&w| rule.admits(g, w)) {
                stuck.insert(v);
            }
        }
        if !stuck.is_empty() {
            partial_halts.push(PartialHalt {
                step: i,
                vertices: stuck,
            });
        }
    }
    Classification {
        verdict,
        partial_halts,
        trace,
    }
}

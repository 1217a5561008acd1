//! Configuration and report types shared by both miners.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::walk::Classification;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `Eⁿ = T`.
    Exact,
    /// `∅ ≠ Eⁿ ⊆ T`.
    Feasible,
}

impl Mode {
    pub fn accepts(self, c: &Classification) -> bool {
        match self {
            Mode::Exact => c.is_exact(),
            Mode::Feasible => c.is_feasible(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Feasible => "feasible",
        }
    }
}

/// Which backward search the miners run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Fidelity {
    /// Safe-set search, complete and sound.
    #[default]
    Repaired,
    /// The original pseudocode as written, kept for comparison runs. It
    /// can miss programs and emits without a simulation check.
    Literal,
}

impl Fidelity {
    pub fn name(self) -> &'static str {
        match self {
            Fidelity::Repaired => "repaired",
            Fidelity::Literal => "literal",
        }
    }
}

#[derive(Debug, Clone)]
pub struct MiningConfig {
    /// Longest program length searched.
    pub max_len: usize,
    /// Per-length cap on emitted programs.
    pub max_programs: Option<usize>,
    /// Per-length cap on search states (triples or chains) pushed.
    pub max_triples: Option<usize>,
    /// Wall-clock budget for the whole session.
    pub time_budget: Option<Duration>,
    pub fidelity: Fidelity,
}

impl MiningConfig {
    pub fn new(max_len: usize) -> Self {
        Self {
            max_len,
            max_programs: None,
            max_triples: None,
            time_budget: None,
            fidelity: Fidelity::Repaired,
        }
    }

    pub fn with_fidelity(mut self, fidelity: Fidelity) -> Self {
        self.fidelity = fidelity;
        self
    }

    pub fn with_max_triples(mut self, cap: usize) -> Self {
        self.max_triples = Some(cap);
        self
    }

    pub fn with_max_programs(mut self, cap: usize) -> Self {
        self.max_programs = Some(cap);
        self
    }

    pub fn with_time_budget(mut self, budget: Duration) -> Self {
        self.time_budget = Some(budget);
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub triples_expanded: u64,
    pub triples_pushed: u64,
    pub pseudo_bases: u64,
    pub dedup_hits: u64,
    pub accepted: u64,
    pub failed_simulation: u64,
    pub criteria_failed: u64,
}

/// All programs found for one length.
///
/// When `exhausted` is true no resource cap was hit and `programs` is the
/// complete set for `length` (deduplicated, sorted).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MiningReport<P> {
    pub mode: Mode,
    pub length: usize,
    pub exhausted: bool,
    pub programs: Vec<P>,
    pub stats: SearchStats,
}

impl<P> MiningReport<P> {
    pub(crate) fn empty(mode: Mode, length: usize, exhausted: bool) -> Self {
        Self {
            mode,
            length,
            exhausted,
            programs: Vec::new(),
            stats: SearchStats::default(),
        }
    }
}

/// Resource accounting for one length of one session.
pub(crate) struct Budget {
    deadline: Option<Instant>,
    max_states: Option<usize>,
    max_programs: Option<usize>,
    states: usize,
    tripped: bool,
}

impl Budget {
    pub(crate) fn new(config: &MiningConfig, deadline: Option<Instant>) -> Self {
        Self {
            deadline,
            max_states: config.max_triples,
            max_programs: config.max_programs,
            states: 0,
            tripped: false,
        }
    }

    /// Records a pushed state; false once any cap is exceeded.
    pub(crate) fn admit_state(&mut self) -> bool {
        self.states += 1;
        if self.max_states.is_some_and(|cap| self.states > cap) {
            self.tripped = true;
        }
        !self.tripped
    }

    pub(crate) fn programs_full(&mut self, found: usize) -> bool {
        if self.max_programs.is_some_and(|cap| found >= cap) {
            self.tripped = true;
        }
        self.tripped
    }

    pub(crate) fn out_of_time(&mut self) -> bool {
        if self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.tripped = true;
        }
        self.tripped
    }

    pub(crate) fn tripped(&self) -> bool {
        self.tripped
    }
}

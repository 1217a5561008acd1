//! Basis-path finding: backward search for chains of pseudo-bases, then one
//! synthesized criterion per step.
//!
//! A chain lists `(B, M, dist)` links from the target backwards. Criteria are
//! only computed once a chain reaches the source, because out-neighbour
//! consistency along the chain already guarantees that they exist.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, FeatureValue, VertexId, VertexSet};
use crate::mining::{Budget, Fidelity, MiningConfig, MiningReport, Mode};
use crate::scp::minimal_covers;
use crate::scp::vibe::check_endpoints;
use crate::stp::{classes_disjoint, classify_stp, compute_criterion, TosetProgram};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Link {
    basis: VertexSet,
    safe: VertexSet,
    dist: usize,
}

/// Links from the target side (index 0) to the current head.
type Chain = Vec<Link>;

/// Streams one [`MiningReport`] per length `0..=max_len`, ascending.
pub struct StpMiner<'g> {
    g: &'g DirectedGraph,
    source: VertexSet,
    target: VertexSet,
    mode: Mode,
    config: MiningConfig,
    deadline: Option<Instant>,
    next_len: usize,
    forward: Vec<VertexSet>,
    carried: Vec<Chain>,
}

impl<'g> StpMiner<'g> {
    pub fn new(
        g: &'g DirectedGraph,
        source: &VertexSet,
        target: &VertexSet,
        mode: Mode,
        config: MiningConfig,
    ) -> Result<Self> {
        if g.schema().is_empty() {
            return Err(Error::NoDimensions);
        }
        check_endpoints(g, source, target)?;
        let deadline = config.time_budget.map(|d| Instant::now() + d);
        let mut miner = Self {
            g,
            source: source.clone(),
            target: target.clone(),
            mode,
            config,
            deadline,
            next_len: 0,
            forward: vec![source.clone()],
            carried: Vec::new(),
        };
        miner.carried = miner.seeds();
        Ok(miner)
    }

    fn seeds(&self) -> Vec<Chain> {
        let link = |basis: VertexSet| {
            vec![Link {
                basis,
                safe: self.target.clone(),
                dist: 0,
            }]
        };
        match self.mode {
            Mode::Exact => vec![link(self.target.clone())],
            Mode::Feasible => self.target.iter().map(|t| link(self.g.singleton(t))).collect(),
        }
    }

    fn extend_forward(&mut self, len: usize) {
        while self.forward.len() <= len {
            let next = self.g.out_neighbors(self.forward.last().unwrap());
            self.forward.push(next);
        }
    }

    fn mine_length(&mut self, len: usize) -> MiningReport<TosetProgram> {
        self.extend_forward(len);
        match self.config.fidelity {
            Fidelity::Repaired => self.repaired(len),
            Fidelity::Literal => self.literal(len),
        }
    }

    fn covers_by_out(&self, pool: &VertexSet, b: &VertexSet) -> Vec<VertexSet> {
        let candidates: Vec<(VertexId, VertexSet)> =
            pool.iter().map(|v| (v, self.g.out_of(v))).collect();
        minimal_covers(self.g.vertex_count(), &candidates, b)
    }

    fn vectors(&self, set: &VertexSet) -> Vec<&[FeatureValue]> {
        set.iter().map(|v| self.g.features(v)).collect()
    }

    /// Phase two: one criterion per step from the source side, each
    /// separating a link's basis from what the previous link can reach
    /// outside its safe set. `None` if some step is inseparable.
    fn synthesize(&self, chain: &Chain, exclusion: impl Fn(usize, &Link) -> VertexSet) -> Option<TosetProgram> {
        let len = chain.len() - 1;
        let mut steps = Vec::with_capacity(len);
        // chain[len] is the source-level head; step k uses chain[len - k]
        for k in 1..=len {
            let link = &chain[len - k];
            let exclude = exclusion(k, link);
            let free = link.safe.difference(&link.basis);
            match compute_criterion(
                self.g.schema(),
                &self.vectors(&link.basis),
                &self.vectors(&free),
                &self.vectors(&exclude),
            ) {
                Ok(c) => steps.push(c),
                Err(_) => return None,
            }
        }
        Some(TosetProgram::new(steps))
    }

    fn emit(
        &self,
        program: TosetProgram,
        found: &mut BTreeSet<TosetProgram>,
        budget: &mut Budget,
        report: &mut MiningReport<TosetProgram>,
    ) -> bool {
        if found.contains(&program) {
            return true;
        }
        let ok = classify_stp(self.g, &self.source, &self.target, &program)
            .map(|c| self.mode.accepts(&c))
            .unwrap_or(false);
        if !ok {
            report.stats.failed_simulation += 1;
            return true;
        }
        if budget.programs_full(found.len()) {
            return false;
        }
        found.insert(program);
        true
    }

    fn repaired(&mut self, len: usize) -> MiningReport<TosetProgram> {
        let g = self.g;
        let reach = &self.forward[len];
        let viable = match self.mode {
            Mode::Exact => self.target.is_subset(reach),
            Mode::Feasible => reach.intersects(&self.target),
        };
        let mut report = MiningReport::empty(self.mode, len, true);
        if !viable {
            return report;
        }
        let mut budget = Budget::new(&self.config, self.deadline);
        let mut found = BTreeSet::new();
        let mut queue: VecDeque<Chain> = VecDeque::new();
        for seed in self.seeds() {
            budget.admit_state();
            report.stats.triples_pushed += 1;
            queue.push_back(seed);
        }

        'search: while let Some(chain) = queue.pop_front() {
            if budget.out_of_time() {
                break;
            }
            let head = chain.last().unwrap();
            if head.dist == len {
                if !(head.basis.is_subset(&self.source) && self.source.is_subset(&head.safe)) {
                    continue;
                }
                debug_assert!(chain.iter().enumerate().all(|(i, l)| l.dist == i) && chain.len() == len + 1);
                report.stats.accepted += 1;
                let program = self.synthesize(&chain, |k, link| {
                    let prev = &chain[len - k + 1];
                    g.out_neighbors(&prev.safe).difference(&link.safe)
                });
                let Some(program) = program else {
                    report.stats.criteria_failed += 1;
                    continue;
                };
                if !self.emit(program, &mut found, &mut budget, &mut report) {
                    break;
                }
                continue;
            }
            report.stats.triples_expanded += 1;
            let j = len - head.dist - 1;
            // Vertices outside M that any criterion selecting B must also
            // select; the previous level may not reach them.
            let b_classes: HashSet<u32> = head.basis.iter().map(|v| g.feature_class(v)).collect();
            let mut safe = g.empty_set();
            for v in &self.forward[j] {
                let clean = g.successors(v).iter().all(|&y| {
                    head.safe.contains(y) || !b_classes.contains(&g.feature_class(y))
                });
                if clean {
                    safe.insert(v);
                }
            }
            if j == 0 && !self.source.is_subset(&safe) {
                continue;
            }
            let pool = safe.intersection(&g.in_neighbors(&head.basis));
            let mut covers = self.covers_by_out(&pool, &head.basis);
            if j == 0 {
                // the source-level basis is discarded by phase two
                covers.truncate(1);
            }
            for cover in covers {
                report.stats.pseudo_bases += 1;
                let leak = g.out_neighbors(&cover).difference(&head.safe);
                if !classes_disjoint(g, &head.basis, &leak) {
                    continue;
                }
                let mut next = chain.clone();
                next.push(Link {
                    basis: cover,
                    safe: safe.clone(),
                    dist: head.dist + 1,
                });
                report.stats.triples_pushed += 1;
                if !budget.admit_state() {
                    break 'search;
                }
                queue.push_back(next);
            }
        }
        report.programs = found.into_iter().collect();
        report.exhausted = !budget.tripped();
        report
    }

    /// The original pseudocode, with chains carried across lengths.
    fn literal(&mut self, len: usize) -> MiningReport<TosetProgram> {
        let g = self.g;
        let mut report = MiningReport::empty(self.mode, len, true);
        if len == 0 {
            let eps = match self.mode {
                Mode::Exact => self.source == self.target,
                Mode::Feasible => self.source.is_subset(&self.target),
            };
            if eps {
                report.programs.push(TosetProgram::epsilon());
            }
            return report;
        }
        if !self.target.is_subset(&self.forward[len]) {
            return report;
        }
        let mut budget = Budget::new(&self.config, self.deadline);
        let mut queue: VecDeque<Chain> = std::mem::take(&mut self.carried).into();
        let mut carried = Vec::new();
        let mut accepted: Vec<Chain> = Vec::new();
        let mut seen: HashSet<Chain> = queue.iter().cloned().collect();

        'search: while let Some(chain) = queue.pop_front() {
            if budget.out_of_time() {
                carried.push(chain);
                carried.extend(queue.drain(..));
                break;
            }
            let n = chain.len();
            let head = chain.last().unwrap();
            if n - 1 == len {
                if head.basis.is_subset(&self.source) && self.source.is_subset(&head.safe) {
                    report.stats.accepted += 1;
                    debug_assert!(chain.iter().enumerate().all(|(i, l)| l.dist == i));
                    accepted.push(chain.clone());
                }
                carried.push(chain);
                continue;
            }
            if n - 1 > len {
                carried.push(chain);
                continue;
            }
            report.stats.triples_expanded += 1;
            let mut pool = g.in_neighbors(&head.basis).intersection(&self.forward[len - n]);
            let leak = g.out_neighbors(&pool).difference(&head.safe);
            let filtered: Vec<VertexId> = pool
                .iter()
                .filter(|&v| {
                    let out = g.out_of(v);
                    !classes_disjoint(g, &out.intersection(&head.basis), &out.intersection(&leak))
                })
                .collect();
            for v in filtered {
                pool.remove(v);
            }
            for cover in self.covers_by_out(&pool, &head.basis) {
                report.stats.pseudo_bases += 1;
                let mut next = chain.clone();
                next.push(Link {
                    basis: cover,
                    safe: pool.clone(),
                    dist: n,
                });
                if !seen.insert(next.clone()) {
                    report.stats.dedup_hits += 1;
                    continue;
                }
                report.stats.triples_pushed += 1;
                if !budget.admit_state() {
                    carried.extend(queue.drain(..));
                    break 'search;
                }
                queue.push_back(next);
            }
        }
        self.carried = carried;

        let mut found = BTreeSet::new();
        for chain in &accepted {
            let program = self.synthesize(chain, |_, link| {
                self.forward[len - link.dist].difference(&link.safe)
            });
            let Some(program) = program else {
                report.stats.criteria_failed += 1;
                continue;
            };
            if !self.emit(program, &mut found, &mut budget, &mut report) {
                break;
            }
        }
        report.programs = found.into_iter().collect();
        report.exhausted = !budget.tripped();
        report
    }
}

impl Iterator for StpMiner<'_> {
    type Item = MiningReport<TosetProgram>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.next_len > self.config.max_len {
            return None;
        }
        let len = self.next_len;
        self.next_len += 1;
        Some(self.mine_length(len))
    }
}

pub fn mine_stp(
    g: &DirectedGraph,
    source: &VertexSet,
    target: &VertexSet,
    mode: Mode,
    config: &MiningConfig,
) -> Result<Vec<MiningReport<TosetProgram>>> {
    Ok(StpMiner::new(g, source, target, mode, config.clone())?.collect())
}

pub fn mine_exact_stp(
    g: &DirectedGraph,
    source: &VertexSet,
    target: &VertexSet,
    config: &MiningConfig,
) -> Result<Vec<MiningReport<TosetProgram>>> {
    mine_stp(g, source, target, Mode::Exact, config)
}

pub fn mine_feasible_stp(
    g: &DirectedGraph,
    source: &VertexSet,
    target: &VertexSet,
    config: &MiningConfig,
) -> Result<Vec<MiningReport<TosetProgram>>> {
    mine_stp(g, source, target, Mode::Feasible, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scp::{simulate_scp, ColorProgram};
    use crate::stp::simulate_stp;

    #[test]
    fn g1_matches_colour_program_endpoints() {
        let (g, s, t) = fixtures::g1();
        let reports = mine_exact_stp(&g, &s, &t, &MiningConfig::new(3)).unwrap();
        let r2 = &reports[2];
        assert!(r2.exhausted);
        assert!(!r2.programs.is_empty());
        let scp = ColorProgram::parse(&g, &["red", "green"]).unwrap();
        let expected = simulate_scp(&g, &s, &scp);
        for p in &r2.programs {
            assert_eq!(simulate_stp(&g, &s, p).unwrap(), expected);
        }
        assert!(reports[1].programs.is_empty() && reports[3].programs.is_empty());
    }

    #[test]
    fn level_split_finds_an_exact_program() {
        let (g, s, t) = fixtures::level_split();
        let reports = mine_exact_stp(&g, &s, &t, &MiningConfig::new(2)).unwrap();
        assert!(!reports[2].programs.is_empty());
        for p in &reports[2].programs {
            assert!(classify_stp(&g, &s, &t, p).unwrap().is_exact());
        }
    }

    #[test]
    fn epsilon_when_source_is_target() {
        let (g, s, _) = fixtures::g1();
        for fidelity in [Fidelity::Repaired, Fidelity::Literal] {
            let config = MiningConfig::new(0).with_fidelity(fidelity);
            let r = mine_exact_stp(&g, &s, &s, &config).unwrap();
            assert_eq!(r[0].programs, vec![TosetProgram::epsilon()]);
        }
    }

    #[test]
    fn literal_run_is_sound() {
        let (g, s, t) = fixtures::qualifications();
        let config = MiningConfig::new(4).with_fidelity(Fidelity::Literal);
        for r in mine_exact_stp(&g, &s, &t, &config).unwrap() {
            for p in &r.programs {
                assert!(classify_stp(&g, &s, &t, p).unwrap().is_exact());
            }
        }
    }
}

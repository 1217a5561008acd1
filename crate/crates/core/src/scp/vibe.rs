//! Backward breadth-first mining of colour programs over pseudo-bases.
//!
//! A search triple `(p, B, M)` stands for every program ending in suffix
//! `p`: any endpoint set `A` with `B ⊆ A ⊆ M` is carried by `p` onto the
//! target (exactly, or into it in feasible mode). Expanding a triple prepends
//! one colour `c` and replaces `(B, M)` by a pseudo-basis for `(B, M)` and the
//! set of previous-level vertices whose c-image stays inside `M`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, VertexSet};
use crate::mining::{Budget, Fidelity, MiningConfig, MiningReport, Mode};
use crate::scp::{classify_scp, enumerate_pseudo_bases, ColorProgram};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Triple {
    suffix: ColorProgram,
    basis: VertexSet,
    safe: VertexSet,
}

/// Streams one [`MiningReport`] per length `0..=max_len`, ascending.
pub struct ScpMiner<'g> {
    g: &'g DirectedGraph,
    source: VertexSet,
    target: VertexSet,
    mode: Mode,
    config: MiningConfig,
    deadline: Option<Instant>,
    next_len: usize,
    forward: Vec<VertexSet>,
    // survivors carried between lengths by the literal search
    carried: Vec<Triple>,
}

pub(crate) fn check_endpoints(g: &DirectedGraph, source: &VertexSet, target: &VertexSet) -> Result<()> {
    if source.is_empty() {
        return Err(Error::EmptyVertexSet("source"));
    }
    if target.is_empty() {
        return Err(Error::EmptyVertexSet("target"));
    }
    let n = g.vertex_count();
    if source.universe() != n || target.universe() != n {
        return Err(Error::Precondition("vertex sets belong to a different graph".into()));
    }
    Ok(())
}

impl<'g> ScpMiner<'g> {
    pub fn new(
        g: &'g DirectedGraph,
        source: &VertexSet,
        target: &VertexSet,
        mode: Mode,
        config: MiningConfig,
    ) -> Result<Self> {
        g.require_colors()?;
        check_endpoints(g, source, target)?;
        let deadline = config.time_budget.map(|d| Instant::now() + d);
        Ok(Self {
            g,
            source: source.clone(),
            target: target.clone(),
            mode,
            config,
            deadline,
            next_len: 0,
            forward: vec![source.clone()],
            carried: vec![Triple {
                suffix: ColorProgram::epsilon(),
                basis: target.clone(),
                safe: target.clone(),
            }],
        })
    }

    /// `N_oʲ(S)` for every `j ≤ len`.
    fn extend_forward(&mut self, len: usize) {
        while self.forward.len() <= len {
            let next = self.g.out_neighbors(self.forward.last().unwrap());
            self.forward.push(next);
        }
    }

    fn mine_length(&mut self, len: usize) -> MiningReport<ColorProgram> {
        self.extend_forward(len);
        match self.config.fidelity {
            Fidelity::Repaired => self.repaired(len),
            Fidelity::Literal => self.literal(len),
        }
    }

    fn seeds(&self) -> Vec<Triple> {
        match self.mode {
            Mode::Exact => vec![Triple {
                suffix: ColorProgram::epsilon(),
                basis: self.target.clone(),
                safe: self.target.clone(),
            }],
            // A singleton basis with the whole target as safe set covers every
            // injection into T.
            Mode::Feasible => self
                .target
                .iter()
                .map(|t| Triple {
                    suffix: ColorProgram::epsilon(),
                    basis: self.g.singleton(t),
                    safe: self.target.clone(),
                })
                .collect(),
        }
    }

    fn repaired(&mut self, len: usize) -> MiningReport<ColorProgram> {
        let g = self.g;
        let reach = &self.forward[len];
        let viable = match self.mode {
            Mode::Exact => self.target.is_subset(reach),
            Mode::Feasible => reach.intersects(&self.target),
        };
        if !viable {
            return MiningReport::empty(self.mode, len, true);
        }
        let mut report = MiningReport::empty(self.mode, len, true);
        let mut budget = Budget::new(&self.config, self.deadline);
        let mut found = BTreeSet::new();
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        for seed in self.seeds() {
            if seen.insert(seed.clone()) {
                budget.admit_state();
                report.stats.triples_pushed += 1;
                queue.push_back(seed);
            }
        }

        'search: while let Some(tr) = queue.pop_front() {
            if budget.out_of_time() {
                break;
            }
            let n = tr.suffix.len();
            if n == len {
                if tr.basis.is_subset(&self.source) && self.source.is_subset(&tr.safe) {
                    report.stats.accepted += 1;
                    if found.contains(&tr.suffix) {
                        continue;
                    }
                    let cls = classify_scp(g, &self.source, &self.target, &tr.suffix);
                    if !self.mode.accepts(&cls) {
                        report.stats.failed_simulation += 1;
                        continue;
                    }
                    if budget.programs_full(found.len()) {
                        break;
                    }
                    found.insert(tr.suffix);
                }
                continue;
            }
            report.stats.triples_expanded += 1;
            let j = len - n - 1;
            let level = &self.forward[j];
            let preds = g.in_neighbors(&tr.basis);
            for c in g.colors_in(&tr.basis) {
                let mut safe = g.empty_set();
                for v in level {
                    if g.vertex_color_image(v, c).is_subset(&tr.safe) {
                        safe.insert(v);
                    }
                }
                let classes: Vec<VertexSet> = if j == 0 {
                    // Every pseudo-basis inside S yields the same program, so
                    // only a safe set holding all of S is worth expanding.
                    if !self.source.is_subset(&safe) {
                        continue;
                    }
                    vec![safe]
                } else {
                    g.colors_in(&safe.intersection(&preds))
                        .into_iter()
                        .map(|d| g.filter_color(&safe, d))
                        .collect()
                };
                for new_safe in classes {
                    let pool = new_safe.intersection(&preds);
                    let bases = enumerate_pseudo_bases(g, &pool, &tr.basis, &tr.safe, c);
                    let take = if j == 0 { bases.len().min(1) } else { bases.len() };
                    for basis in bases.into_iter().take(take) {
                        report.stats.pseudo_bases += 1;
                        let next = Triple {
                            suffix: tr.suffix.prepend(c),
                            basis,
                            safe: new_safe.clone(),
                        };
                        if !seen.insert(next.clone()) {
                            report.stats.dedup_hits += 1;
                            continue;
                        }
                        report.stats.triples_pushed += 1;
                        if !budget.admit_state() {
                            break 'search;
                        }
                        queue.push_back(next);
                    }
                }
            }
        }
        report.programs = found.into_iter().collect();
        report.exhausted = !budget.tripped();
        report
    }

    /// The original pseudocode, including survivors carried across lengths.
    fn literal(&mut self, len: usize) -> MiningReport<ColorProgram> {
        let g = self.g;
        let mut report = MiningReport::empty(self.mode, len, true);
        if len == 0 {
            let eps = match self.mode {
                Mode::Exact => self.source == self.target,
                Mode::Feasible => self.source.is_subset(&self.target),
            };
            if eps {
                report.programs.push(ColorProgram::epsilon());
            }
            return report;
        }
        if !self.target.is_subset(&self.forward[len]) {
            return report;
        }
        let mut budget = Budget::new(&self.config, self.deadline);
        let mut found = BTreeSet::new();
        let mut seen = HashSet::new();
        let mut queue: VecDeque<Triple> = std::mem::take(&mut self.carried).into();
        for tr in &queue {
            seen.insert(tr.clone());
        }
        let mut carried = Vec::new();

        'search: while let Some(tr) = queue.pop_front() {
            if budget.out_of_time() {
                carried.push(tr);
                carried.extend(queue.drain(..));
                break;
            }
            let n = tr.suffix.len();
            if n == len {
                let first = tr.suffix.colors()[0];
                let back = g.in_neighbors(&g.color_image(&tr.basis, first));
                if tr.basis.is_subset(&self.source) && self.source.is_subset(&back) {
                    report.stats.accepted += 1;
                    if !found.contains(&tr.suffix) {
                        let cls = classify_scp(g, &self.source, &self.target, &tr.suffix);
                        if !self.mode.accepts(&cls) {
                            report.stats.failed_simulation += 1;
                        }
                        if budget.programs_full(found.len()) {
                            carried.push(tr);
                            carried.extend(queue.drain(..));
                            break;
                        }
                        found.insert(tr.suffix.clone());
                    }
                }
                carried.push(tr);
                continue;
            }
            report.stats.triples_expanded += 1;
            let pool_all = self.forward[len - n - 1].intersection(&g.in_neighbors(&tr.basis));
            for c in g.colors_in(&tr.basis) {
                for d in g.colors_in(&pool_all) {
                    let nd = if len != n + 1 {
                        g.filter_color(&pool_all, d)
                    } else {
                        pool_all.clone()
                    };
                    let bases: Vec<VertexSet> = if self.mode == Mode::Feasible && n == 0 {
                        nd.iter()
                            .filter(|&v| {
                                let img = g.vertex_color_image(v, c);
                                !img.is_empty() && img.is_subset(&tr.safe)
                            })
                            .map(|v| g.singleton(v))
                            .collect()
                    } else {
                        enumerate_pseudo_bases(g, &nd, &tr.basis, &tr.safe, c)
                    };
                    for basis in bases {
                        report.stats.pseudo_bases += 1;
                        let next = Triple {
                            suffix: tr.suffix.prepend(c),
                            basis,
                            safe: nd.clone(),
                        };
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
            }
        }
        self.carried = carried;
        report.programs = found.into_iter().collect();
        report.exhausted = !budget.tripped();
        report
    }
}

impl Iterator for ScpMiner<'_> {
    type Item = MiningReport<ColorProgram>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.next_len > self.config.max_len {
            return None;
        }
        let len = self.next_len;
        self.next_len += 1;
        Some(self.mine_length(len))
    }
}

pub fn mine_scp(
    g: &DirectedGraph,
    source: &VertexSet,
    target: &VertexSet,
    mode: Mode,
    config: &MiningConfig,
) -> Result<Vec<MiningReport<ColorProgram>>> {
    Ok(ScpMiner::new(g, source, target, mode, config.clone())?.collect())
}

pub fn mine_exact_scp(
    g: &DirectedGraph,
    source: &VertexSet,
    target: &VertexSet,
    config: &MiningConfig,
) -> Result<Vec<MiningReport<ColorProgram>>> {
    mine_scp(g, source, target, Mode::Exact, config)
}

pub fn mine_feasible_scp(
    g: &DirectedGraph,
    source: &VertexSet,
    target: &VertexSet,
    config: &MiningConfig,
) -> Result<Vec<MiningReport<ColorProgram>>> {
    mine_scp(g, source, target, Mode::Feasible, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn rendered(g: &DirectedGraph, r: &MiningReport<ColorProgram>) -> Vec<String> {
        r.programs.iter().map(|p| p.display(g).to_string()).collect()
    }

    #[test]
    fn g1_exact() {
        let (g, s, t) = fixtures::g1();
        let reports = mine_exact_scp(&g, &s, &t, &MiningConfig::new(4)).unwrap();
        assert_eq!(reports.len(), 5);
        assert!(reports.iter().all(|r| r.exhausted));
        assert_eq!(rendered(&g, &reports[2]), ["red·green"]);
        for r in reports.iter().filter(|r| r.length != 2) {
            assert!(r.programs.is_empty(), "length {}", r.length);
        }
    }

    #[test]
    fn g2_repaired_finds_partial_halting_program() {
        let (g, s, t) = fixtures::g2();
        let reports = mine_exact_scp(&g, &s, &t, &MiningConfig::new(3)).unwrap();
        assert_eq!(rendered(&g, &reports[3]), ["red·green·yellow"]);
    }

    #[test]
    fn g2_literal_misses_it() {
        let (g, s, t) = fixtures::g2();
        let config = MiningConfig::new(3).with_fidelity(Fidelity::Literal);
        let reports = mine_exact_scp(&g, &s, &t, &config).unwrap();
        assert!(reports[3].programs.is_empty());
    }

    #[test]
    fn epsilon_at_length_zero() {
        let (g, s, _) = fixtures::g1();
        let r = mine_exact_scp(&g, &s, &s, &MiningConfig::new(0)).unwrap();
        assert_eq!(r[0].programs, vec![ColorProgram::epsilon()]);
        let superset = s.union(&g.vertex_set(&["t"]).unwrap());
        let r = mine_feasible_scp(&g, &s, &superset, &MiningConfig::new(0)).unwrap();
        assert_eq!(r[0].programs, vec![ColorProgram::epsilon()]);
        let r = mine_exact_scp(&g, &s, &superset, &MiningConfig::new(0)).unwrap();
        assert!(r[0].programs.is_empty());
    }

    #[test]
    fn feasible_with_whole_graph_as_target() {
        let (g, s, _) = fixtures::g1();
        let all = g.all_vertices();
        let reports = mine_feasible_scp(&g, &s, &all, &MiningConfig::new(3)).unwrap();
        for r in &reports {
            let expected = crate::oracle::brute::brute_force_mine_scp(&g, &s, &all, r.length)
                .unwrap()
                .feasible;
            assert_eq!(r.programs, expected);
        }
    }

    #[test]
    fn triple_cap_marks_report_incomplete() {
        let (g, s, t) = fixtures::g1();
        let config = MiningConfig::new(2).with_max_triples(1);
        let reports = mine_exact_scp(&g, &s, &t, &config).unwrap();
        assert!(!reports[2].exhausted);
    }

    #[test]
    fn empty_source_is_rejected() {
        let (g, _, t) = fixtures::g1();
        assert!(matches!(
            mine_exact_scp(&g, &g.empty_set(), &t, &MiningConfig::new(1)),
            Err(Error::EmptyVertexSet("source"))
        ));
    }

    #[test]
    fn reports_are_deterministic() {
        let (g, s, t) = fixtures::two_feasible();
        let a = mine_feasible_scp(&g, &s, &t, &MiningConfig::new(4)).unwrap();
        let b = mine_feasible_scp(&g, &s, &t, &MiningConfig::new(4)).unwrap();
        assert_eq!(a, b);
    }
}

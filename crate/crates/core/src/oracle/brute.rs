//! Exhaustive reference implementations.
//!
//! Nothing here shares code with the miners beyond graph access: endpoint
//! sets are `BTreeSet`s stepped edge by edge.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{Color, DirectedGraph, VertexId, VertexSet};
use crate::scp::ColorProgram;

pub const DEFAULT_CAP: u128 = 1_000_000;

/// Endpoint sets `E⁰ … Eⁿ` of a colour program, computed naively.
pub fn naive_trace(g: &DirectedGraph, source: &VertexSet, colors: &[Color]) -> Vec<BTreeSet<VertexId>> {
    let mut sets = vec![source.iter().collect::<BTreeSet<_>>()];
    for &c in colors {
        let mut next = BTreeSet::new();
        for &u in sets.last().unwrap() {
            for &v in g.successors(u) {
                if g.color_of(v) == Some(c) {
                    next.insert(v);
                }
            }
        }
        sets.push(next);
    }
    sets
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OracleSets {
    pub exact: Vec<ColorProgram>,
    /// Includes the exact programs.
    pub feasible: Vec<ColorProgram>,
}

fn check_cap(k: usize, len: usize, cap: u128) -> Result<()> {
    let requested = (k as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
    if requested > cap {
        return Err(Error::CapExceeded { requested, cap });
    }
    Ok(())
}

/// Visits every colour program of length `len` in lexicographic order.
fn scan_programs(
    g: &DirectedGraph,
    len: usize,
    cap: u128,
    mut visit: impl FnMut(&[Color]),
) -> Result<()> {
    let k = g.color_count();
    check_cap(k, len, cap)?;
    if len > 0 && k == 0 {
        return Ok(());
    }
    let mut digits = vec![0u32; len];
    loop {
        let p: Vec<Color> = digits.iter().map(|&d| Color(d)).collect();
        visit(&p);
        // odometer increment, last position fastest
        let mut i = len;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            digits[i] += 1;
            if (digits[i] as usize) < k {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Simulates all `kˡ` colour programs of length `len` and sorts them into
/// exact and feasible.
pub fn brute_force_mine_scp(
    g: &DirectedGraph,
    source: &VertexSet,
    target: &VertexSet,
    len: usize,
) -> Result<OracleSets> {
    brute_force_mine_scp_capped(g, source, target, len, DEFAULT_CAP)
}

pub fn brute_force_mine_scp_capped(
    g: &DirectedGraph,
    source: &VertexSet,
    target: &VertexSet,
    len: usize,
    cap: u128,
) -> Result<OracleSets> {
    let t: BTreeSet<VertexId> = target.iter().collect();
    let mut out = OracleSets::default();
    scan_programs(g, len, cap, |p| {
        let trace = naive_trace(g, source, p);
        let last = trace.last().unwrap();
        let reached_all = trace.iter().all(|e| !e.is_empty());
        if reached_all && last.is_subset(&t) {
            out.feasible.push(ColorProgram::new(p.to_vec()));
            if *last == t {
                out.exact.push(ColorProgram::new(p.to_vec()));
            }
        }
    })?;
    Ok(out)
}

/// Colour traces of all walks of `len` edges from `S` into `T`.
///
/// A walk `w₀ … wₙ` reads the colours of `w₁ … wₙ`. Only vertices that can
/// still reach `T` in the remaining steps are explored; `cap` bounds the
/// number of explored walk prefixes.
pub fn walk_traces(
    g: &DirectedGraph,
    source: &VertexSet,
    target: &VertexSet,
    len: usize,
    cap: u128,
) -> Result<BTreeSet<ColorProgram>> {
    // alive[i]: vertices with a walk of exactly i edges into T
    let mut alive = vec![target.clone()];
    for i in 0..len {
        let prev = g.in_neighbors(&alive[i]);
        alive.push(prev);
    }
    let mut traces = BTreeSet::new();
    let mut explored: u128 = 0;
    let mut stack: Vec<(VertexId, Vec<Color>)> = source
        .iter()
        .filter(|&s| alive[len].contains(s))
        .map(|s| (s, Vec::new()))
        .collect();
    while let Some((v, colors)) = stack.pop() {
        explored += 1;
        if explored > cap {
            return Err(Error::CapExceeded {
                requested: explored,
                cap,
            });
        }
        if colors.len() == len {
            traces.insert(ColorProgram::new(colors));
            continue;
        }
        let remaining = len - colors.len() - 1;
        for &w in g.successors(v) {
            if let (true, Some(c)) = (alive[remaining].contains(w), g.color_of(w)) {
                let mut next = colors.clone();
                next.push(c);
                stack.push((w, next));
            }
        }
    }
    Ok(traces)
}

/// A walk `s = w₀ … wₙ = t` whose vertex colours read `p`, extracted
/// backwards through the endpoint sets. `None` if `p` does not end in `T`.
pub fn extract_walk(
    g: &DirectedGraph,
    source: &VertexSet,
    target: &VertexSet,
    p: &ColorProgram,
) -> Option<Vec<VertexId>> {
    let trace = naive_trace(g, source, p.colors());
    let mut cur = *trace.last().unwrap().iter().find(|&&t| target.contains(t))?;
    let mut walk = vec![cur];
    for i in (0..p.len()).rev() {
        cur = *g.predecessors(cur).iter().find(|u| trace[i].contains(u))?;
        walk.push(cur);
    }
    walk.reverse();
    Some(walk)
}

/// All ⊆-minimal subsets of `universe` whose images jointly contain `b`,
/// by scanning every subset. `images[v]` is the image of vertex `v`.
pub fn minimal_covers_bruteforce(
    universe: &VertexSet,
    images: &[VertexSet],
    b: &VertexSet,
) -> Result<Vec<VertexSet>> {
    let members = universe.to_vec();
    if members.len() > 20 {
        return Err(Error::CapExceeded {
            requested: 1u128 << members.len(),
            cap: 1 << 20,
        });
    }
    let m = members.len();
    let covering: Vec<u32> = (0u32..1 << m)
        .filter(|&mask| {
            let mut covered = VertexSet::empty(b.universe());
            for (i, &v) in members.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    covered.union_with(&images[v]);
                }
            }
            b.is_subset(&covered)
        })
        .collect();
    let mut out: Vec<VertexSet> = covering
        .iter()
        .filter(|&&mask| !covering.iter().any(|&o| o != mask && o & mask == o))
        .map(|&mask| {
            VertexSet::from_ids(
                universe.universe(),
                (0..m).filter(|i| mask >> i & 1 == 1).map(|i| members[i]),
            )
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Exact endpoint traces reachable when every step may select any nonempty
/// set of colours. On a graph whose only feature is the colour this is every
/// trace a toset program can produce, since a criterion there selects by a
/// set of colour values.
pub fn color_set_exact_traces(
    g: &DirectedGraph,
    source: &VertexSet,
    target: &VertexSet,
    len: usize,
    cap: u128,
) -> Result<BTreeSet<Vec<BTreeSet<VertexId>>>> {
    let k = g.color_count();
    let masks = (1u128 << k) - 1;
    check_cap(masks as usize, len, cap)?;
    let t: BTreeSet<VertexId> = target.iter().collect();
    let mut out = BTreeSet::new();
    let mut stack = vec![vec![source.iter().collect::<BTreeSet<_>>()]];
    while let Some(sets) = stack.pop() {
        let cur = sets.last().unwrap();
        if sets.len() == len + 1 {
            if *cur == t {
                out.insert(sets);
            }
            continue;
        }
        for mask in 1..=masks as u32 {
            let mut next = BTreeSet::new();
            for &u in cur {
                for &v in g.successors(u) {
                    if g.color_of(v).is_some_and(|c| mask >> c.0 & 1 == 1) {
                        next.insert(v);
                    }
                }
            }
            if next.is_empty() {
                continue;
            }
            let mut ext = sets.clone();
            ext.push(next);
            stack.push(ext);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn names(g: &DirectedGraph, ps: &[ColorProgram]) -> Vec<String> {
        ps.iter().map(|p| p.display(g).to_string()).collect()
    }

    #[test]
    fn g1_length_two() {
        let (g, s, t) = fixtures::g1();
        let o = brute_force_mine_scp(&g, &s, &t, 2).unwrap();
        assert_eq!(names(&g, &o.exact), ["red·green"]);
        assert_eq!(names(&g, &o.feasible), ["red·green"]);
    }

    #[test]
    fn epsilon_iff_source_is_target() {
        let (g, s, t) = fixtures::g1();
        assert_eq!(brute_force_mine_scp(&g, &s, &s, 0).unwrap().exact, vec![ColorProgram::epsilon()]);
        assert!(brute_force_mine_scp(&g, &s, &t, 0).unwrap().exact.is_empty());
    }

    #[test]
    fn g2_length_three() {
        let (g, s, t) = fixtures::g2();
        let o = brute_force_mine_scp(&g, &s, &t, 3).unwrap();
        assert_eq!(names(&g, &o.exact), ["red·green·yellow"]);
        let traces: Vec<_> = walk_traces(&g, &s, &t, 3, DEFAULT_CAP).unwrap().into_iter().collect();
        assert_eq!(names(&g, &traces), ["red·green·yellow"]);
    }

    #[test]
    fn g1_walk_traces() {
        let (g, s, t) = fixtures::g1();
        let traces: Vec<_> = walk_traces(&g, &s, &t, 2, DEFAULT_CAP).unwrap().into_iter().collect();
        assert_eq!(names(&g, &traces), ["red·green"]);
        assert!(walk_traces(&g, &s, &t, 1, DEFAULT_CAP).unwrap().is_empty());
    }

    #[test]
    fn cap_is_enforced() {
        let (g, s, t) = fixtures::g1();
        assert!(matches!(
            brute_force_mine_scp_capped(&g, &s, &t, 3, 10),
            Err(Error::CapExceeded { requested: 27, cap: 10 })
        ));
    }

    #[test]
    fn walk_extraction() {
        let (g, s, t) = fixtures::g1();
        let p = ColorProgram::parse(&g, &["red", "green"]).unwrap();
        let w = extract_walk(&g, &s, &t, &p).unwrap();
        assert_eq!(w.len(), 3);
        assert!(s.contains(w[0]) && t.contains(w[2]));
        for pair in w.windows(2) {
            assert!(g.successors(pair[0]).contains(&pair[1]));
        }
    }

    #[test]
    fn subset_scan_examples() {
        let n = 5;
        let set = |ids: &[usize]| VertexSet::from_ids(n, ids.iter().copied());
        let universe = set(&[0, 1, 2]);
        let images = vec![set(&[3]), set(&[4]), set(&[3, 4]), set(&[]), set(&[])];
        let got = minimal_covers_bruteforce(&universe, &images, &set(&[3, 4])).unwrap();
        assert_eq!(got, vec![set(&[0, 1]), set(&[2])]);
        assert_eq!(minimal_covers_bruteforce(&universe, &images, &set(&[])).unwrap(), vec![set(&[])]);
        assert!(minimal_covers_bruteforce(&universe, &images, &set(&[0])).unwrap().is_empty());
    }
}

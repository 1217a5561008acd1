//! Minimal cover enumeration (pseudo-bases).

use crate::graph::{Color, DirectedGraph, VertexId, VertexSet};

/// All ⊆-minimal subsets of the candidates whose images jointly contain `b`.
///
/// `candidates` pairs each vertex with its image. The result is sorted
/// lexicographically by member ids. An empty `b` has the single minimal
/// cover ∅.
///
/// Branches on the lowest uncovered element of `b`. Each candidate tried for
/// that element is banned from the later sibling branches, so every cover is
/// produced once. A partial cover in which some member has lost all of its
/// private elements is cut, so every completed cover is already minimal.
pub fn minimal_covers(
    universe: usize,
    candidates: &[(VertexId, VertexSet)],
    b: &VertexSet,
) -> Vec<VertexSet> {
    let mut ids = Vec::new();
    let mut imgs = Vec::new();
    for (v, img) in candidates {
        let useful = img.intersection(b);
        if !useful.is_empty() {
            ids.push(*v);
            imgs.push(useful);
        }
    }
    let mut search = CoverSearch {
        universe,
        banned: vec![false; ids.len()],
        ids,
        imgs,
        b,
        chosen: Vec::new(),
        out: Vec::new(),
    };
    search.run(&VertexSet::empty(b.universe()));
    let mut out = search.out;
    out.sort();
    out.dedup();
    out
}

struct CoverSearch<'a> {
    universe: usize,
    ids: Vec<VertexId>,
    imgs: Vec<VertexSet>,
    banned: Vec<bool>,
    b: &'a VertexSet,
    chosen: Vec<usize>,
    out: Vec<VertexSet>,
}

impl CoverSearch<'_> {
    fn run(&mut self, covered: &VertexSet) {
        let uncovered = self.b.difference(covered);
        let Some(x) = uncovered.first() else {
            let ids = self.chosen.iter().map(|&i| self.ids[i]);
            self.out.push(VertexSet::from_ids(self.universe, ids));
            return;
        };
        let mut reachable = VertexSet::empty(self.b.universe());
        for (i, img) in self.imgs.iter().enumerate() {
            if !self.banned[i] {
                reachable.union_with(img);
            }
        }
        if !uncovered.is_subset(&reachable) {
            return;
        }
        let mut banned_here = Vec::new();
        for i in 0..self.imgs.len() {
            if self.banned[i] || !self.imgs[i].contains(x) {
                continue;
            }
            self.chosen.push(i);
            if self.all_private() {
                let next = covered.union(&self.imgs[i]);
                self.run(&next);
            }
            self.chosen.pop();
            self.banned[i] = true;
            banned_here.push(i);
        }
        for i in banned_here {
            self.banned[i] = false;
        }
    }

    /// Every chosen member still covers something no other member covers.
    fn all_private(&self) -> bool {
        let n = self.chosen.len();
        (0..n).all(|k| {
            let mut own = self.imgs[self.chosen[k]].clone();
            for (j, &m) in self.chosen.iter().enumerate() {
                if j != k {
                    own.difference_with(&self.imgs[m]);
                }
            }
            !own.is_empty()
        })
    }
}

/// Minimal `𝓑 ⊆ pool` that c-cover `b` and c-inject `m`.
///
/// Pool members whose c-image leaves `m` are excluded up front. Yields
/// nothing for an empty `b`: the empty set injects nothing.
pub fn enumerate_pseudo_bases(
    g: &DirectedGraph,
    pool: &VertexSet,
    b: &VertexSet,
    m: &VertexSet,
    c: Color,
) -> Vec<VertexSet> {
    if b.is_empty() {
        return Vec::new();
    }
    let candidates: Vec<(VertexId, VertexSet)> = pool
        .iter()
        .map(|v| (v, g.vertex_color_image(v, c)))
        .filter(|(_, img)| img.is_subset(m))
        .collect();
    minimal_covers(g.vertex_count(), &candidates, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    fn set(n: usize, ids: &[usize]) -> VertexSet {
        VertexSet::from_ids(n, ids.iter().copied())
    }

    #[test]
    fn g1_green_pseudo_bases() {
        let (g, _, t) = fixtures::g1();
        let pool = g.vertex_set(&["a", "b"]).unwrap();
        let green = g.color_by_name("green").unwrap();
        let got = enumerate_pseudo_bases(&g, &pool, &t, &t, green);
        let names: Vec<Vec<&str>> = got.iter().map(|s| g.set_names(s)).collect();
        assert_eq!(names, vec![vec!["a"], vec!["b"]]);
    }

    #[test]
    fn joint_cover_and_single_cover() {
        // v1:{x} v2:{y} v3:{x,y} with x=3, y=4
        let n = 5;
        let cands = vec![(0, set(n, &[3])), (1, set(n, &[4])), (2, set(n, &[3, 4]))];
        let got = minimal_covers(n, &cands, &set(n, &[3, 4]));
        assert_eq!(got, vec![set(n, &[0, 1]), set(n, &[2])]);
    }

    #[test]
    fn degenerate_targets() {
        let n = 3;
        let cands = vec![(0, set(n, &[1]))];
        assert_eq!(minimal_covers(n, &cands, &set(n, &[])), vec![set(n, &[])]);
        assert!(minimal_covers(n, &cands, &set(n, &[2])).is_empty());
    }

    #[test]
    fn uncoverable_pool_is_empty() {
        let (g, _, t) = fixtures::g1();
        let pool = g.vertex_set(&["s1"]).unwrap();
        let green = g.color_by_name("green").unwrap();
        assert!(enumerate_pseudo_bases(&g, &pool, &t, &t, green).is_empty());
    }

    fn brute(n: usize, cands: &[(VertexId, VertexSet)], b: &VertexSet) -> Vec<VertexSet> {
        let k = cands.len();
        let covering: Vec<u32> = (0u32..1 << k)
            .filter(|mask| {
                let mut u = VertexSet::empty(n);
                for (i, (_, img)) in cands.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        u.union_with(img);
                    }
                }
                b.is_subset(&u)
            })
            .collect();
        let mut out: Vec<VertexSet> = covering
            .iter()
            .filter(|&&m| !covering.iter().any(|&o| o != m && o & m == o))
            .map(|&m| VertexSet::from_ids(n, (0..k).filter(|i| m >> i & 1 == 1).map(|i| cands[i].0)))
            .collect();
        out.sort();
        out
    }

    proptest! {
        #[test]
        fn matches_subset_scan(
            imgs in prop::collection::vec(prop::collection::btree_set(0usize..8, 0..4), 0..9),
            b in prop::collection::btree_set(0usize..8, 0..5),
        ) {
            let n = 9;
            let cands: Vec<(VertexId, VertexSet)> = imgs
                .iter()
                .enumerate()
                .map(|(i, s)| (i, VertexSet::from_ids(n, s.iter().copied())))
                .collect();
            let b = VertexSet::from_ids(n, b);
            let got = minimal_covers(n, &cands, &b);
            prop_assert_eq!(&got, &brute(n, &cands, &b));
            for cover in &got {
                for v in cover {
                    let mut u = VertexSet::empty(n);
                    for w in cover.iter().filter(|&w| w != v) {
                        u.union_with(&cands[w].1);
                    }
                    prop_assert!(!b.is_subset(&u));
                }
            }
        }
    }
}

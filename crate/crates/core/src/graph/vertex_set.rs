use std::cmp::Ordering;
use std::fmt;

pub type VertexId = usize;

const WORD: usize = u64::BITS as usize;

/// Dense bitset over the vertex ids `0..universe` of one graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    universe: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        Self {
            universe,
            words: vec![0; universe.div_ceil(WORD)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut set = Self::empty(universe);
        for w in set.words.iter_mut() {
            *w = !0;
        }
        set.trim();
        set
    }

    pub fn singleton(universe: usize, v: VertexId) -> Self {
        let mut set = Self::empty(universe);
        set.insert(v);
        set
    }

    pub fn from_ids<I: IntoIterator<Item = VertexId>>(universe: usize, ids: I) -> Self {
        let mut set = Self::empty(universe);
        for v in ids {
            set.insert(v);
        }
        set
    }

    fn trim(&mut self) {
        let rem = self.universe % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, v: VertexId) -> bool {
        assert!(v < self.universe, "vertex {v} outside universe {}", self.universe);
        let (i, mask) = (v / WORD, 1u64 << (v % WORD));
        let fresh = self.words[i] & mask == 0;
        self.words[i] |= mask;
        fresh
    }

    pub fn remove(&mut self, v: VertexId) -> bool {
        assert!(v < self.universe, "vertex {v} outside universe {}", self.universe);
        let (i, mask) = (v / WORD, 1u64 << (v % WORD));
        let present = self.words[i] & mask != 0;
        self.words[i] &= !mask;
        present
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v < self.universe && self.words[v / WORD] & (1u64 << (v % WORD)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn first(&self) -> Option<VertexId> {
        self.iter().next()
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    fn check_universe(&self, other: &Self) {
        assert_eq!(
            self.universe, other.universe,
            "vertex sets from different graphs"
        );
    }

    pub fn union_with(&mut self, other: &Self) {
        self.check_universe(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &Self) {
        self.check_universe(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &Self) {
        self.check_universe(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.check_universe(other);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_superset(&self, other: &Self) -> bool {
        other.is_subset(self)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.check_universe(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        !self.is_disjoint(other)
    }

    pub fn to_vec(&self) -> Vec<VertexId> {
        self.iter().collect()
    }
}

/// Lexicographic by ascending member ids.
impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter()
            .cmp(other.iter())
            .then(self.universe.cmp(&other.universe))
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = VertexId;

    fn next(&mut self) -> Option<VertexId> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = VertexId;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn full_respects_universe() {
        let s = VertexSet::full(70);
        assert_eq!(s.len(), 70);
        assert!(s.contains(69));
        assert!(!s.contains(70));
        assert_eq!(VertexSet::full(0).len(), 0);
    }

    #[test]
    fn iteration_crosses_words() {
        let s = VertexSet::from_ids(200, [0, 63, 64, 130, 199]);
        assert_eq!(s.to_vec(), vec![0, 63, 64, 130, 199]);
        assert_eq!(s.first(), Some(0));
    }

    #[test]
    fn ordering_is_lexicographic_by_members() {
        let a = VertexSet::from_ids(10, [1, 5]);
        let b = VertexSet::from_ids(10, [1, 2, 9]);
        let c = VertexSet::from_ids(10, [1]);
        assert!(b < a);
        assert!(c < b);
    }

    proptest! {
        #[test]
        fn algebra_matches_btreeset(
            xs in proptest::collection::btree_set(0usize..100, 0..40),
            ys in proptest::collection::btree_set(0usize..100, 0..40),
        ) {
            let a = VertexSet::from_ids(100, xs.iter().copied());
            let b = VertexSet::from_ids(100, ys.iter().copied());
            let u: Vec<_> = xs.union(&ys).copied().collect();
            let i: Vec<_> = xs.intersection(&ys).copied().collect();
            let d: Vec<_> = xs.difference(&ys).copied().collect();
            prop_assert_eq!(a.union(&b).to_vec(), u);
            prop_assert_eq!(a.intersection(&b).to_vec(), i);
            prop_assert_eq!(a.difference(&b).to_vec(), d);
            prop_assert_eq!(a.is_subset(&b), xs.is_subset(&ys));
            prop_assert_eq!(a.len(), xs.len());
            prop_assert_eq!(a.cmp(&b), xs.iter().cmp(ys.iter()));
        }
    }
}

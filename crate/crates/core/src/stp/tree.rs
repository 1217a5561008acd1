//! Criterion synthesis by an unpruned binary decision tree.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::graph::{FeatureKind, FeatureSchema, FeatureValue};
use crate::stp::criterion::{Criterion, Op};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Test {
    /// Present and `≤ t`.
    AtMost(FeatureValue),
    /// Equal to the value; `Missing` is the presence test.
    Equals(FeatureValue),
}

#[derive(Debug, Clone, Copy)]
struct Split {
    dim: usize,
    test: Test,
}

impl Split {
    fn passes(&self, x: &[FeatureValue]) -> bool {
        let v = x[self.dim];
        match self.test {
            Test::AtMost(t) => !v.is_missing() && v <= t,
            Test::Equals(w) => v == w,
        }
    }
}

/// Σ bᵢ·eᵢ/nᵢ over the two children, kept as an exact fraction.
#[derive(Debug, Clone, Copy)]
struct Impurity {
    num: u128,
    den: u128,
}

impl Impurity {
    fn of(left: (usize, usize), right: (usize, usize)) -> Self {
        let part = |(b, e): (usize, usize)| ((b * e) as u128, (b + e) as u128);
        let (a, n1) = part(left);
        let (c, n2) = part(right);
        Impurity {
            num: a * n2 + c * n1,
            den: n1 * n2,
        }
    }

    fn cmp(&self, other: &Self) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

struct Grower<'a> {
    schema: &'a FeatureSchema,
    points: Vec<&'a [FeatureValue]>,
    // true for points that must satisfy the criterion
    include: Vec<bool>,
    paths: Vec<Criterion>,
}

impl Grower<'_> {
    fn grow(&mut self, node: Vec<usize>, path: &mut Vec<(Split, bool)>) {
        let b = node.iter().filter(|&&i| self.include[i]).count();
        if b == 0 {
            return;
        }
        if b == node.len() {
            let leaf: Vec<usize> = node;
            self.paths.push(self.render_path(path, &leaf));
            return;
        }
        let split = self.best_split(&node).expect("mixed collision-free node has a split");
        let (yes, no): (Vec<usize>, Vec<usize>) =
            node.iter().partition(|&&i| split.passes(self.points[i]));
        path.push((split, true));
        self.grow(yes, path);
        path.pop();
        path.push((split, false));
        self.grow(no, path);
        path.pop();
    }

    fn candidates(&self, node: &[usize], dim: usize) -> Vec<Split> {
        let mut present = BTreeSet::new();
        let mut missing = false;
        for &i in node {
            let v = self.points[i][dim];
            if v.is_missing() {
                missing = true;
            } else {
                present.insert(v);
            }
        }
        let mut out = Vec::new();
        if missing && !present.is_empty() {
            out.push(Split {
                dim,
                test: Test::Equals(FeatureValue::Missing),
            });
        }
        let kind = self.schema.dimensions()[dim].kind();
        let last = present.len().saturating_sub(1);
        for (k, &v) in present.iter().enumerate() {
            match kind {
                FeatureKind::Ordered if k < last || missing => out.push(Split {
                    dim,
                    test: Test::AtMost(v),
                }),
                FeatureKind::Categorical if present.len() > 1 || missing => out.push(Split {
                    dim,
                    test: Test::Equals(v),
                }),
                _ => {}
            }
        }
        out
    }

    fn best_split(&self, node: &[usize]) -> Option<Split> {
        let mut best: Option<(Impurity, Split)> = None;
        for dim in 0..self.schema.len() {
            for split in self.candidates(node, dim) {
                let mut counts = [(0, 0), (0, 0)];
                for &i in node {
                    let side = &mut counts[usize::from(!split.passes(self.points[i]))];
                    if self.include[i] {
                        side.0 += 1;
                    } else {
                        side.1 += 1;
                    }
                }
                let [l, r] = counts;
                if l.0 + l.1 == 0 || r.0 + r.1 == 0 {
                    continue;
                }
                let score = Impurity::of(l, r);
                if best.as_ref().is_none_or(|(s, _)| score.cmp(s) == Ordering::Less) {
                    best = Some((score, split));
                }
            }
        }
        best.map(|(_, s)| s)
    }

    /// Distinct values of the leaf's include points on `dim`, ascending.
    fn leaf_values(&self, leaf: &[usize], dim: usize) -> Vec<FeatureValue> {
        let set: BTreeSet<FeatureValue> = leaf.iter().map(|&i| self.points[i][dim]).collect();
        set.into_iter().collect()
    }

    fn render_path(&self, path: &[(Split, bool)], leaf: &[usize]) -> Criterion {
        if path.is_empty() {
            let values = self.leaf_values(leaf, 0);
            return any(values.into_iter().map(|w| Criterion::atom(0, Op::Eq, w)).collect());
        }
        let mut atoms = Vec::new();
        for &(split, taken) in path {
            let dim = split.dim;
            let atom = match (split.test, taken) {
                (Test::AtMost(t), true) => Criterion::atom(dim, Op::Le, t),
                (Test::Equals(w), true) => Criterion::atom(dim, Op::Eq, w),
                (Test::AtMost(t), false) => {
                    let values = self.leaf_values(leaf, dim);
                    let mut parts = Vec::new();
                    if values.iter().any(|v| !v.is_missing()) {
                        parts.push(Criterion::atom(dim, Op::Gt, t));
                    }
                    if values.iter().any(FeatureValue::is_missing) {
                        parts.push(Criterion::atom(dim, Op::Eq, FeatureValue::Missing));
                    }
                    any(parts)
                }
                // Negated equality: name the values the leaf actually holds.
                (Test::Equals(_), false) => {
                    let values = self.leaf_values(leaf, dim);
                    any(values.into_iter().map(|w| Criterion::atom(dim, Op::Eq, w)).collect())
                }
            };
            atoms.push(atom);
        }
        all(atoms)
    }
}

fn any(mut cs: Vec<Criterion>) -> Criterion {
    if cs.len() == 1 {
        cs.pop().unwrap()
    } else {
        Criterion::Any(cs)
    }
}

fn all(mut cs: Vec<Criterion>) -> Criterion {
    if cs.len() == 1 {
        cs.pop().unwrap()
    } else {
        Criterion::All(cs)
    }
}

/// First include/exclude pair with identical vectors, by include index.
pub fn find_collision<V: AsRef<[FeatureValue]>>(include: &[V], exclude: &[V]) -> Option<(usize, usize)> {
    let mut first = HashMap::new();
    for (j, e) in exclude.iter().enumerate() {
        first.entry(e.as_ref()).or_insert(j);
    }
    include
        .iter()
        .enumerate()
        .find_map(|(i, b)| first.get(b.as_ref()).map(|&j| (i, j)))
}

/// A criterion satisfied by every vector of `include` and by none of
/// `exclude`; vectors of `free` may go either way and carry no weight.
///
/// Splits greedily on the lowest weighted Gini impurity (ties: lowest
/// dimension, then smallest threshold, presence test first) until every
/// leaf is pure, then returns the disjunction of the paths to include
/// leaves. Negated tests are written as the values the leaf actually holds,
/// so the result stays as close to `include` as the tree allows.
pub fn compute_criterion<V: AsRef<[FeatureValue]>>(
    schema: &FeatureSchema,
    include: &[V],
    free: &[V],
    exclude: &[V],
) -> Result<Criterion> {
    let _ = free;
    if schema.is_empty() {
        return Err(Error::NoDimensions);
    }
    if include.is_empty() {
        return Err(Error::Precondition("criterion needs at least one include vector".into()));
    }
    for v in include.iter().chain(exclude) {
        if !schema.conforms(v.as_ref()) {
            return Err(Error::Precondition("feature vector does not fit the schema".into()));
        }
    }
    if let Some((i, j)) = find_collision(include, exclude) {
        return Err(Error::Inseparable {
            include: i,
            exclude: j,
        });
    }
    let mut points: Vec<&[FeatureValue]> = include.iter().map(AsRef::as_ref).collect();
    points.extend(exclude.iter().map(AsRef::as_ref));
    let mut grower = Grower {
        schema,
        include: (0..points.len()).map(|i| i < include.len()).collect(),
        points,
        paths: Vec::new(),
    };
    let node: Vec<usize> = (0..grower.points.len()).collect();
    grower.grow(node, &mut Vec::new());
    Ok(any(grower.paths))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn num(x: f64) -> FeatureValue {
        FeatureValue::number(x).unwrap()
    }

    fn ordered(dims: usize) -> FeatureSchema {
        let mut s = FeatureSchema::new();
        for d in 0..dims {
            s.add_dimension(&format!("f{d}"), FeatureKind::Ordered).unwrap();
        }
        s
    }

    #[test]
    fn single_threshold() {
        let s = ordered(1);
        let c = compute_criterion(&s, &[vec![num(2.0)]], &[], &[vec![num(5.0)]]).unwrap();
        assert_eq!(c, Criterion::atom(0, Op::Le, num(2.0)));
    }

    #[test]
    fn corner_point() {
        let s = ordered(2);
        let b = [vec![num(1.0), num(1.0)]];
        let e = [vec![num(1.0), num(2.0)], vec![num(2.0), num(1.0)]];
        let c = compute_criterion(&s, &b, &[], &e).unwrap();
        assert!(c.eval(&b[0]));
        assert!(e.iter().all(|x| !c.eval(x)));
    }

    #[test]
    fn identical_vectors_are_inseparable() {
        let s = ordered(1);
        let r = compute_criterion(&s, &[vec![num(1.0)]], &[], &[vec![num(1.0)]]);
        assert!(matches!(r, Err(Error::Inseparable { include: 0, exclude: 0 })));
    }

    #[test]
    fn missingness_alone_separates() {
        let s = ordered(1);
        let c = compute_criterion(&s, &[vec![FeatureValue::Missing]], &[], &[vec![num(1.0)]]).unwrap();
        assert_eq!(c, Criterion::atom(0, Op::Eq, FeatureValue::Missing));
        let c = compute_criterion(&s, &[vec![num(1.0)]], &[], &[vec![FeatureValue::Missing]]).unwrap();
        assert!(c.eval(&[num(1.0)]) && !c.eval(&[FeatureValue::Missing]));
    }

    #[test]
    fn categorical_negation_is_tight() {
        let mut s = FeatureSchema::new();
        s.add_dimension("color", FeatureKind::Categorical).unwrap();
        for name in ["red", "green", "blue"] {
            s.intern(0, name).unwrap();
        }
        let red = FeatureValue::Category(0);
        let green = FeatureValue::Category(1);
        let blue = FeatureValue::Category(2);
        let c = compute_criterion(&s, &[vec![red], vec![blue]], &[], &[vec![green]]).unwrap();
        assert!(c.eval(&[red]) && c.eval(&[blue]) && !c.eval(&[green]));
        let c = compute_criterion(&s, &[vec![red]], &[], &[vec![green], vec![blue]]).unwrap();
        assert_eq!(c, Criterion::atom(0, Op::Eq, red));
    }

    #[test]
    fn empty_exclude_names_the_include_values() {
        let s = ordered(1);
        let c = compute_criterion(&s, &[vec![num(3.0)]], &[], &[]).unwrap();
        assert_eq!(c, Criterion::atom(0, Op::Eq, num(3.0)));
    }

    #[test]
    fn no_dimensions() {
        let s = FeatureSchema::new();
        let b: [Vec<FeatureValue>; 1] = [vec![]];
        assert!(matches!(compute_criterion(&s, &b, &[], &[]), Err(Error::NoDimensions)));
    }

    fn value() -> impl Strategy<Value = FeatureValue> {
        prop_oneof![1 => Just(FeatureValue::Missing), 4 => (0i32..4).prop_map(|x| num(x as f64))]
    }

    proptest! {
        #[test]
        fn separates_whenever_collision_free(
            b in prop::collection::vec(prop::collection::vec(value(), 3), 1..8),
            e in prop::collection::vec(prop::collection::vec(value(), 3), 0..8),
        ) {
            let s = ordered(3);
            match compute_criterion(&s, &b, &[], &e) {
                Ok(c) => {
                    c.validate(&s).unwrap();
                    prop_assert!(b.iter().all(|x| c.eval(x)));
                    prop_assert!(e.iter().all(|x| !c.eval(x)));
                }
                Err(Error::Inseparable { include, exclude }) => {
                    prop_assert_eq!(&b[include], &e[exclude]);
                }
                Err(other) => prop_assert!(false, "{other}"),
            }
        }
    }
}

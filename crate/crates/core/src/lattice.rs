//! Validated finite lattices.
//!
//! A [`FiniteLattice`] is built from a cover relation over opaque string
//! identifiers. Construction derives the partial order, the cover lists and
//! full join/meet tables; afterwards the value is immutable and every query is
//! a table lookup. Internal indices follow the lexicographic order of the
//! identifiers, so two lattices built from the same data index identically.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::chains;
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct FiniteLattice {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    leq: Vec<bool>,
    lower: Vec<Vec<usize>>,
    upper: Vec<Vec<usize>>,
    join: Vec<usize>,
    meet: Vec<usize>,
    height: Vec<usize>,
    bottom: usize,
    top: usize,
}

/// Summary of the structural predicates of a lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PropertyReport {
    pub distributive: bool,
    pub semimodular: bool,
    pub boolean: bool,
    pub slim: bool,
    pub length: usize,
    pub join_irreducible_count: usize,
}

/// A cover-preserving four-element boolean sublattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FourCell {
    pub bottom: usize,
    pub left: usize,
    pub right: usize,
    pub top: usize,
}

/// Builds a lattice from identifiers and a transitively reduced cover relation.
pub fn build_lattice<I, S, C, A, B>(elements: I, covers: C) -> Result<FiniteLattice>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
    C: IntoIterator<Item = (A, B)>,
    A: AsRef<str>,
    B: AsRef<str>,
{
    let mut ids: Vec<String> = elements.into_iter().map(Into::into).collect();
    if ids.is_empty() {
        return Err(Error::Empty);
    }
    ids.sort();
    for w in ids.windows(2) {
        if w[0] == w[1] {
            return Err(Error::DuplicateElement(w[0].clone()));
        }
    }
    let index: HashMap<String, usize> = ids.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let n = ids.len();

    let mut cover_set = BTreeSet::new();
    for (a, b) in covers {
        let (a, b) = (a.as_ref(), b.as_ref());
        let (Some(&x), Some(&y)) = (index.get(a), index.get(b)) else {
            return Err(Error::UnknownElement(a.to_string(), b.to_string()));
        };
        if x == y {
            return Err(Error::CycleDetected(a.to_string()));
        }
        cover_set.insert((x, y));
    }
    let mut up: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut indegree = vec![0usize; n];
    for &(x, y) in &cover_set {
        up[x].push(y);
        indegree[y] += 1;
    }

    // Kahn's algorithm; leftovers sit on a cycle.
    let mut order = Vec::with_capacity(n);
    let mut stack: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    while let Some(x) = stack.pop() {
        order.push(x);
        for &y in &up[x] {
            indegree[y] -= 1;
            if indegree[y] == 0 {
                stack.push(y);
            }
        }
    }
    if order.len() < n {
        let stuck = (0..n).find(|&i| indegree[i] > 0).unwrap();
        return Err(Error::CycleDetected(ids[stuck].clone()));
    }

    let mut leq = vec![false; n * n];
    for &x in order.iter().rev() {
        leq[x * n + x] = true;
        for &y in &up[x] {
            for z in 0..n {
                if leq[y * n + z] {
                    leq[x * n + z] = true;
                }
            }
        }
    }
    for &(x, y) in &cover_set {
        if up[x].iter().any(|&c| c != y && leq[c * n + y]) {
            return Err(Error::NonReducedCovers(ids[x].clone(), ids[y].clone()));
        }
    }
    FiniteLattice::finish(ids, index, leq)
}

impl FiniteLattice {
    /// Builds a lattice from identifiers and an order predicate over their positions.
    ///
    /// The identifiers need not be sorted; `leq(i, j)` refers to positions in
    /// the slice as given.
    pub fn from_order<F>(ids: Vec<String>, leq: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> bool,
    {
        let n = ids.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut perm: Vec<usize> = (0..n).collect();
        perm.sort_by(|&a, &b| ids[a].cmp(&ids[b]));
        let sorted: Vec<String> = perm.iter().map(|&i| ids[i].clone()).collect();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateElement(w[0].clone()));
            }
        }
        let mut table = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = leq(perm[a], perm[b]);
            }
        }
        for a in 0..n {
            if !table[a * n + a] {
                return Err(Error::ValidationFailed(format!("order is not reflexive at `{}`", sorted[a])));
            }
            for b in 0..n {
                if a != b && table[a * n + b] && table[b * n + a] {
                    return Err(Error::CycleDetected(sorted[a].clone()));
                }
                if table[a * n + b] {
                    for c in 0..n {
                        if table[b * n + c] && !table[a * n + c] {
                            return Err(Error::ValidationFailed(format!(
                                "order is not transitive at `{}`",
                                sorted[b]
                            )));
                        }
                    }
                }
            }
        }
        let index = sorted.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Self::finish(sorted, index, table)
    }

    fn finish(ids: Vec<String>, index: HashMap<String, usize>, leq: Vec<bool>) -> Result<Self> {
        let n = ids.len();
        let le = |a: usize, b: usize| leq[a * n + b];

        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for a in 0..n {
            for b in a..n {
                let j = least(n, |u| le(a, u) && le(b, u), &le)
                    .ok_or_else(|| Error::NotALattice(ids[a].clone(), ids[b].clone()))?;
                let m = least(n, |u| le(u, a) && le(u, b), &|x, y| le(y, x))
                    .ok_or_else(|| Error::NotALattice(ids[a].clone(), ids[b].clone()))?;
                join[a * n + b] = j;
                join[b * n + a] = j;
                meet[a * n + b] = m;
                meet[b * n + a] = m;
            }
        }

        let mut lower = vec![Vec::new(); n];
        let mut upper = vec![Vec::new(); n];
        for a in 0..n {
            for b in 0..n {
                if a != b && le(a, b) && !(0..n).any(|c| c != a && c != b && le(a, c) && le(c, b)) {
                    upper[a].push(b);
                    lower[b].push(a);
                }
            }
        }

        let mut by_size: Vec<usize> = (0..n).collect();
        by_size.sort_by_key(|&x| (0..n).filter(|&y| le(y, x)).count());
        let mut height = vec![0; n];
        for &x in &by_size {
            height[x] = lower[x].iter().map(|&y| height[y] + 1).max().unwrap_or(0);
        }

        let bottom = (0..n).find(|&x| (0..n).all(|y| le(x, y))).expect("lattice has a bottom");
        let top = (0..n).find(|&x| (0..n).all(|y| le(y, x))).expect("lattice has a top");
        Ok(Self { ids, index, leq, lower, upper, join, meet, height, bottom, top })
    }

    /// The `n`-element chain with identifiers `0`, `1`, ….
    pub fn chain(n: usize) -> Self {
        assert!(n > 0, "chain needs at least one element");
        let ids: Vec<String> = (0..n).map(|i| format!("{i:0width$}", width = digits(n - 1))).collect();
        Self::from_order(ids, |a, b| a <= b).expect("chains are lattices")
    }

    /// Direct product of the given lattices, together with the coordinate
    /// tuple (factor indices) of every element of the product.
    pub fn product_with_coords(factors: &[&FiniteLattice]) -> (Self, Vec<Vec<usize>>) {
        assert!(!factors.is_empty(), "product needs a factor");
        let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
        for f in factors {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    (0..f.len()).map(move |i| {
                        let mut t = t.clone();
                        t.push(i);
                        t
                    })
                })
                .collect();
        }
        let ids: Vec<String> = tuples
            .iter()
            .map(|t| {
                let parts: Vec<&str> = t.iter().zip(factors).map(|(&i, f)| f.id(i)).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        let lattice = Self::from_order(ids.clone(), |a, b| {
            tuples[a].iter().zip(&tuples[b]).zip(factors).all(|((&x, &y), f)| f.leq(x, y))
        })
        .expect("products of lattices are lattices");
        let mut coords = vec![Vec::new(); tuples.len()];
        for (t, id) in tuples.into_iter().zip(&ids) {
            coords[lattice.index_of(id).unwrap()] = t;
        }
        (lattice, coords)
    }

    pub fn product(factors: &[&FiniteLattice]) -> Self {
        Self::product_with_coords(factors).0
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, x: usize) -> &str {
        &self.ids[x]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// `a ≺ b`: `b` covers `a`.
    pub fn is_cover(&self, a: usize, b: usize) -> bool {
        self.upper[a].contains(&b)
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b]
    }

    pub fn join_all<I: IntoIterator<Item = usize>>(&self, xs: I) -> usize {
        xs.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn meet_all<I: IntoIterator<Item = usize>>(&self, xs: I) -> usize {
        xs.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower[x]
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper[x]
    }

    /// All cover pairs `(lower, upper)` in index order.
    pub fn cover_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.elements().flat_map(move |a| self.upper[a].iter().map(move |&b| (a, b)))
    }

    /// Cover pairs as identifier pairs, sorted lexicographically.
    pub fn cover_ids(&self) -> Vec<(String, String)> {
        let mut out: Vec<_> = self.cover_pairs().map(|(a, b)| (self.ids[a].clone(), self.ids[b].clone())).collect();
        out.sort();
        out
    }

    pub fn down_set(&self, x: usize) -> Vec<usize> {
        self.elements().filter(|&y| self.leq(y, x)).collect()
    }

    pub fn up_set(&self, x: usize) -> Vec<usize> {
        self.elements().filter(|&y| self.leq(x, y)).collect()
    }

    pub fn interval(&self, a: usize, b: usize) -> Vec<usize> {
        self.elements().filter(|&y| self.leq(a, y) && self.leq(y, b)).collect()
    }

    /// Height of `x`: length of the longest chain from the bottom to `x`.
    pub fn height(&self, x: usize) -> usize {
        self.height[x]
    }

    /// Length of the longest chain.
    pub fn length(&self) -> usize {
        self.height[self.top]
    }

    pub fn is_chain(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.comparable(a, b)))
    }

    /// Nonzero elements with exactly one lower cover.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        self.elements().filter(|&x| self.lower[x].len() == 1).collect()
    }

    pub fn meet_irreducibles(&self) -> Vec<usize> {
        self.elements().filter(|&x| self.upper[x].len() == 1).collect()
    }

    pub fn atoms(&self) -> Vec<usize> {
        self.upper[self.bottom].clone()
    }

    pub fn is_distributive(&self) -> bool {
        let n = self.len();
        (0..n).all(|x| {
            (0..n).all(|y| (0..n).all(|z| self.meet(x, self.join(y, z)) == self.join(self.meet(x, y), self.meet(x, z))))
        })
    }

    /// Upper semimodularity: `x ⪯ y` implies `x ∨ z ⪯ y ∨ z`.
    pub fn is_semimodular(&self) -> bool {
        self.cover_pairs().all(|(x, y)| {
            self.elements().all(|z| {
                let (a, b) = (self.join(x, z), self.join(y, z));
                a == b || self.is_cover(a, b)
            })
        })
    }

    /// True iff `S ↦ ⋁S` is an isomorphism from the power set of the atoms.
    pub fn is_boolean(&self) -> bool {
        let atoms = self.atoms();
        let k = atoms.len();
        if k >= usize::BITS as usize - 1 || self.len() != 1usize << k {
            return false;
        }
        let joins: Vec<usize> = (0..1usize << k)
            .map(|mask| self.join_all((0..k).filter(|i| mask >> i & 1 == 1).map(|i| atoms[i])))
            .collect();
        let mut seen = vec![false; self.len()];
        for &j in &joins {
            if std::mem::replace(&mut seen[j], true) {
                return false;
            }
        }
        (0..joins.len()).all(|s| (0..joins.len()).all(|t| !self.leq(joins[s], joins[t]) || s & !t == 0))
    }

    /// Slim: the join-irreducibles are covered by two chains.
    pub fn is_slim(&self) -> bool {
        chains::width(self, &self.join_irreducibles()) <= 2
    }

    pub fn classify_properties(&self) -> PropertyReport {
        PropertyReport {
            distributive: self.is_distributive(),
            semimodular: self.is_semimodular(),
            boolean: self.is_boolean(),
            slim: self.is_slim(),
            length: self.length(),
            join_irreducible_count: self.join_irreducibles().len(),
        }
    }

    /// Every cover-preserving four-element boolean sublattice.
    ///
    /// Outside a planar diagram there is no intrinsic left/right; the corner
    /// with the larger identifier is reported as `left`.
    pub fn four_cells(&self) -> Vec<FourCell> {
        let mut cells = Vec::new();
        for top in self.elements() {
            let lc = &self.lower[top];
            for (i, &p) in lc.iter().enumerate() {
                for &q in &lc[i + 1..] {
                    let bottom = self.meet(p, q);
                    if self.is_cover(bottom, p) && self.is_cover(bottom, q) {
                        let (left, right) = if p > q { (p, q) } else { (q, p) };
                        cells.push(FourCell { bottom, left, right, top });
                    }
                }
            }
        }
        cells.sort();
        cells
    }

    /// Nonempty and closed under join and meet.
    pub fn check_sublattice(&self, subset: &[usize]) -> bool {
        if subset.is_empty() {
            return false;
        }
        let mut member = vec![false; self.len()];
        for &x in subset {
            member[x] = true;
        }
        subset.iter().all(|&a| subset.iter().all(|&b| member[self.join(a, b)] && member[self.meet(a, b)]))
    }

    /// The sublattice on `subset` as a lattice of its own, with the map from
    /// its indices back into `self`.
    pub fn induced(&self, subset: &[usize]) -> Result<(FiniteLattice, Vec<usize>)> {
        if !self.check_sublattice(subset) {
            return Err(Error::NotASublattice);
        }
        let mut subset = subset.to_vec();
        subset.sort_unstable();
        subset.dedup();
        let ids: Vec<String> = subset.iter().map(|&x| self.ids[x].clone()).collect();
        let sub = FiniteLattice::from_order(ids, |a, b| self.leq(subset[a], subset[b]))?;
        // Identifiers are sorted in both, so positions line up with `subset`.
        Ok((sub, subset))
    }

    /// Same lattice with identifiers renamed by `rename`.
    pub fn relabel<F: Fn(&str) -> String>(&self, rename: F) -> Result<Self> {
        let ids: Vec<String> = self.ids.iter().map(|s| rename(s)).collect();
        Self::from_order(ids, |a, b| self.leq(a, b))
    }

    /// Resolves identifiers to indices.
    pub fn indices_of<S: AsRef<str>>(&self, ids: &[S]) -> Option<Vec<usize>> {
        ids.iter().map(|s| self.index_of(s.as_ref())).collect()
    }
}

impl PartialEq for FiniteLattice {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids && self.leq == other.leq
    }
}

impl Eq for FiniteLattice {}

impl fmt::Debug for FiniteLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteLattice")
            .field("elements", &self.ids)
            .field("covers", &self.cover_ids())
            .finish()
    }
}

fn least<P, L>(n: usize, bound: P, le: &L) -> Option<usize>
where
    P: Fn(usize) -> bool,
    L: Fn(usize, usize) -> bool,
{
    let mut best: Option<usize> = None;
    for u in (0..n).filter(|&u| bound(u)) {
        match best {
            Some(b) if !le(u, b) => {}
            _ => best = Some(u),
        }
    }
    let b = best?;
    (0..n).filter(|&u| bound(u)).all(|u| le(b, u)).then_some(b)
}

fn digits(mut n: usize) -> usize {
    let mut d = 1;
    while n >= 10 {
        n /= 10;
        d += 1;
    }
    d
}

#[cfg(test)]
pub(crate) fn canonical_s7() -> FiniteLattice {
    build_lattice(
        ["0", "u", "v", "l", "m", "r", "1"],
        [("0", "u"), ("0", "v"), ("u", "l"), ("u", "m"), ("v", "m"), ("v", "r"), ("l", "1"), ("m", "1"), ("r", "1")],
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s7() -> FiniteLattice {
        canonical_s7()
    }

    fn idx(l: &FiniteLattice, ids: &[&str]) -> Vec<usize> {
        l.indices_of(ids).unwrap()
    }

    #[test]
    fn three_chain() {
        let c3 = build_lattice(["0", "a", "1"], [("0", "a"), ("a", "1")]).unwrap();
        assert_eq!(c3.len(), 3);
        assert!(c3.is_chain());
        assert_eq!(c3.id(c3.bottom()), "0");
        assert_eq!(c3.id(c3.top()), "1");
        assert_eq!(c3.length(), 2);
    }

    #[test]
    fn two_maximal_elements_are_rejected() {
        let err = build_lattice(["0", "a", "b"], [("0", "a"), ("0", "b")]).unwrap_err();
        assert_eq!(err, Error::NotALattice("a".into(), "b".into()));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            build_lattice(["a", "b"], [("a", "b"), ("b", "a")]).unwrap_err(),
            Error::CycleDetected("a".into())
        );
        assert_eq!(
            build_lattice(["0", "a", "1"], [("0", "a"), ("a", "1"), ("0", "1")]).unwrap_err(),
            Error::NonReducedCovers("0".into(), "1".into())
        );
        assert_eq!(
            build_lattice(["0", "1"], [("0", "x")]).unwrap_err(),
            Error::UnknownElement("0".into(), "x".into())
        );
        assert_eq!(build_lattice(["0", "0"], Vec::<(&str, &str)>::new()).unwrap_err(), Error::DuplicateElement("0".into()));
        assert_eq!(build_lattice(Vec::<&str>::new(), Vec::<(&str, &str)>::new()).unwrap_err(), Error::Empty);
    }

    #[test]
    fn s7_structure() {
        let s = s7();
        assert_eq!(s.len(), 7);
        assert_eq!(s.id(s.bottom()), "0");
        assert_eq!(s.id(s.top()), "1");
        let ji: Vec<&str> = s.join_irreducibles().into_iter().map(|x| s.id(x)).collect();
        assert_eq!(ji, vec!["l", "r", "u", "v"]);
        assert_eq!(s.four_cells().len(), 3);
        let p = s.classify_properties();
        assert!(p.semimodular && p.slim && !p.distributive && !p.boolean);
        assert_eq!((p.length, p.join_irreducible_count), (3, 4));
    }

    #[test]
    fn cube_and_chain() {
        let c2 = FiniteLattice::chain(2);
        let b3 = FiniteLattice::product(&[&c2, &c2, &c2]);
        assert_eq!(b3.join_irreducibles(), b3.atoms());
        let p = b3.classify_properties();
        assert!(p.distributive && p.boolean && !p.slim);
        assert_eq!(p.length, 3);

        let c5 = FiniteLattice::chain(5);
        assert_eq!(c5.join_irreducibles().len(), 4);
        let p = c5.classify_properties();
        assert!(p.distributive && p.slim && !p.boolean);
    }

    #[test]
    fn three_by_two_grid() {
        let g = FiniteLattice::product(&[&FiniteLattice::chain(3), &FiniteLattice::chain(2)]);
        let p = g.classify_properties();
        assert!(p.distributive && !p.boolean && p.slim);
        assert_eq!(p.length, 3);
        assert_eq!(p.join_irreducible_count, 3);
        assert_eq!(g.four_cells().len(), 2);

        assert!(g.check_sublattice(&idx(&g, &["(0,0)", "(1,0)", "(0,1)", "(1,1)"])));
        assert!(!g.check_sublattice(&idx(&g, &["(0,0)", "(2,0)", "(0,1)"])));
        assert!(g.check_sublattice(&g.elements().collect::<Vec<_>>()));
        assert!(!g.check_sublattice(&[]));
    }

    #[test]
    fn boolean_square_has_one_cell() {
        let b2 = FiniteLattice::product(&[&FiniteLattice::chain(2), &FiniteLattice::chain(2)]);
        assert_eq!(b2.four_cells().len(), 1);
        assert!(b2.is_boolean());
    }

    #[test]
    fn grid_cell_count() {
        for m in 1..=4 {
            for n in 1..=4 {
                let g = FiniteLattice::product(&[&FiniteLattice::chain(m + 1), &FiniteLattice::chain(n + 1)]);
                assert_eq!(g.four_cells().len(), m * n);
            }
        }
    }

    #[test]
    fn induced_sublattice_keeps_ids() {
        let g = FiniteLattice::product(&[&FiniteLattice::chain(3), &FiniteLattice::chain(2)]);
        let sub = idx(&g, &["(0,0)", "(2,0)", "(0,1)", "(2,1)"]);
        let (b2, back) = g.induced(&sub).unwrap();
        assert!(b2.is_boolean());
        for (i, &x) in back.iter().enumerate() {
            assert_eq!(b2.id(i), g.id(x));
        }
        assert_eq!(g.induced(&idx(&g, &["(0,1)", "(1,0)"])).unwrap_err(), Error::NotASublattice);
    }

    #[test]
    fn long_chain_ids_sort_numerically() {
        let c = FiniteLattice::chain(12);
        assert_eq!(c.id(c.bottom()), "00");
        assert_eq!(c.id(c.top()), "11");
        assert_eq!(c.length(), 11);
    }
}

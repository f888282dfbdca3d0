use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::FiniteLattice;

/// A lattice homomorphism, checked on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    source: FiniteLattice,
    target: FiniteLattice,
    map: Vec<usize>,
}

impl Homomorphism {
    pub fn new(source: &FiniteLattice, target: &FiniteLattice, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.len() || map.iter().any(|&y| y >= target.len()) {
            return Err(Error::NotAHomomorphism("map is not total".into()));
        }
        for a in source.elements() {
            for b in source.elements().skip(a + 1) {
                if map[source.join(a, b)] != target.join(map[a], map[b]) {
                    return Err(Error::NotAHomomorphism(format!(
                        "join of `{}` and `{}` not preserved",
                        source.id(a),
                        source.id(b)
                    )));
                }
                if map[source.meet(a, b)] != target.meet(map[a], map[b]) {
                    return Err(Error::NotAHomomorphism(format!(
                        "meet of `{}` and `{}` not preserved",
                        source.id(a),
                        source.id(b)
                    )));
                }
            }
        }
        Ok(Self { source: source.clone(), target: target.clone(), map })
    }

    pub fn identity(lattice: &FiniteLattice) -> Self {
        Self { source: lattice.clone(), target: lattice.clone(), map: lattice.elements().collect() }
    }

    pub fn source(&self) -> &FiniteLattice {
        &self.source
    }

    pub fn target(&self) -> &FiniteLattice {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn preserves_bounds(&self) -> bool {
        self.map[self.source.bottom()] == self.target.bottom() && self.map[self.source.top()] == self.target.top()
    }

    pub fn is_cover_preserving(&self) -> bool {
        self.source.cover_pairs().all(|(a, b)| self.target.is_cover(self.map[a], self.map[b]))
    }

    /// Preserves 0, 1 and the covering relation.
    pub fn is_cover01(&self) -> bool {
        self.preserves_bounds() && self.is_cover_preserving()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        self.image().len() == self.target.len()
    }

    /// Distinct image elements, in index order.
    pub fn image(&self) -> Vec<usize> {
        let mut img = self.map.clone();
        img.sort_unstable();
        img.dedup();
        img
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Homomorphism) -> Result<Homomorphism> {
        if first.target != self.source {
            return Err(Error::NotAHomomorphism("composition of incompatible maps".into()));
        }
        let map = first.map.iter().map(|&y| self.map[y]).collect();
        Ok(Homomorphism { source: first.source.clone(), target: self.target.clone(), map })
    }

    /// An endomorphism that fixes `sub` pointwise and maps everything into it.
    pub fn is_retraction_onto(&self, sub: &[usize]) -> bool {
        if self.source != self.target {
            return false;
        }
        let mut member = vec![false; self.source.len()];
        sub.iter().for_each(|&x| member[x] = true);
        sub.iter().all(|&x| self.map[x] == x) && self.map.iter().all(|&y| member[y])
    }

    pub fn is_idempotent(&self) -> bool {
        self.source == self.target && self.map.iter().all(|&y| self.map[y] == y)
    }

    pub fn kernel(&self) -> Congruence {
        Congruence::from_labels_unchecked(&self.source, &self.map)
    }

    /// `(source id, target id)` pairs in source order.
    pub fn id_pairs(&self) -> Vec<(String, String)> {
        self.source.elements().map(|x| (self.source.id(x).to_string(), self.target.id(self.map[x]).to_string())).collect()
    }
}

/// A congruence of a finite lattice, stored as a partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Congruence {
    lattice: FiniteLattice,
    block_of: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

impl Congruence {
    /// Partition by equal labels; fails if the partition is not compatible
    /// with join and meet.
    pub fn from_labels<K: Eq + std::hash::Hash + Clone>(lattice: &FiniteLattice, labels: &[K]) -> Result<Self> {
        let c = Self::from_labels_unchecked(lattice, labels);
        if !c.is_compatible() {
            return Err(Error::ValidationFailed("partition is not a congruence".into()));
        }
        Ok(c)
    }

    pub(crate) fn from_labels_unchecked<K: Eq + std::hash::Hash + Clone>(lattice: &FiniteLattice, labels: &[K]) -> Self {
        let mut ids: HashMap<K, usize> = HashMap::new();
        let mut block_of = Vec::with_capacity(labels.len());
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (x, k) in labels.iter().enumerate() {
            let next = ids.len();
            let b = *ids.entry(k.clone()).or_insert(next);
            if b == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[b].push(x);
            block_of.push(b);
        }
        Self { lattice: lattice.clone(), block_of, blocks }
    }

    pub fn diagonal(lattice: &FiniteLattice) -> Self {
        let labels: Vec<usize> = lattice.elements().collect();
        Self::from_labels_unchecked(lattice, &labels)
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    /// Blocks in order of their smallest member.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    pub fn block_containing(&self, x: usize) -> &[usize] {
        &self.blocks[self.block_of[x]]
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.block_of[x] == self.block_of[y]
    }

    pub fn is_diagonal(&self) -> bool {
        self.blocks.len() == self.lattice.len()
    }

    /// `(x, y) ∈ Θ` implies `(x∨z, y∨z), (x∧z, y∧z) ∈ Θ`.
    pub fn is_compatible(&self) -> bool {
        let l = &self.lattice;
        self.blocks.iter().all(|block| {
            let r = block[0];
            block[1..].iter().all(|&x| {
                l.elements().all(|z| self.related(l.join(x, z), l.join(r, z)) && self.related(l.meet(x, z), l.meet(r, z)))
            })
        })
    }

    pub fn blocks_are_convex_sublattices(&self) -> bool {
        let l = &self.lattice;
        self.blocks.iter().all(|block| {
            let lo = l.meet_all(block.iter().copied());
            let hi = l.join_all(block.iter().copied());
            self.related(lo, block[0]) && self.related(hi, block[0]) && l.interval(lo, hi).iter().all(|&y| self.related(y, block[0]))
        })
    }

    pub fn intersect(&self, other: &Congruence) -> Result<Congruence> {
        if self.lattice != other.lattice {
            return Err(Error::ValidationFailed("congruences of different lattices".into()));
        }
        let labels: Vec<(usize, usize)> = self.block_of.iter().copied().zip(other.block_of.iter().copied()).collect();
        Ok(Self::from_labels_unchecked(&self.lattice, &labels))
    }

    /// Whether distinct elements of `subset` lie in distinct blocks.
    pub fn is_diagonal_on(&self, subset: &[usize]) -> bool {
        let mut seen = vec![false; self.blocks.len()];
        subset.iter().all(|&x| !std::mem::replace(&mut seen[self.block_of[x]], true))
    }
}

/// Outcome of [`check_cover01`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Cover01Report {
    pub is_cover01: bool,
    pub is_embedding: bool,
    pub lengths_equal: bool,
}

/// Classifies a homomorphism between semimodular lattices: a cover-preserving
/// {0,1}-map is an embedding between lattices of equal length, and conversely.
pub fn check_cover01(f: &Homomorphism) -> Result<Cover01Report> {
    if !f.source().is_semimodular() || !f.target().is_semimodular() {
        return Err(Error::NotSemimodular);
    }
    let report = Cover01Report {
        is_cover01: f.is_cover01(),
        is_embedding: f.is_injective(),
        lengths_equal: f.source().length() == f.target().length(),
    };
    if report.is_cover01 && !(report.is_embedding && report.lengths_equal) {
        return Err(Error::ValidationFailed("cover-preserving {0,1}-map is not an equal-length embedding".into()));
    }
    if report.is_embedding && report.lengths_equal && !report.is_cover01 {
        return Err(Error::ValidationFailed("equal-length embedding does not preserve covers".into()));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn identity_on_square_is_cover01() {
        let b2 = make_grid(&[2, 2]).unwrap().into_lattice();
        let r = check_cover01(&Homomorphism::identity(&b2)).unwrap();
        assert!(r.is_cover01 && r.is_embedding && r.lengths_equal);
    }

    #[test]
    fn chain_into_square() {
        let b2 = make_grid(&[2, 2]).unwrap().into_lattice();
        let c3 = FiniteLattice::chain(3);
        let map = b2.indices_of(&["(0,0)", "(1,0)", "(1,1)"]).unwrap();
        let f = Homomorphism::new(&c3, &b2, map).unwrap();
        assert!(check_cover01(&f).unwrap().is_cover01);
    }

    #[test]
    fn two_chain_into_three_chain_skips_a_level() {
        let c2 = FiniteLattice::chain(2);
        let c3 = FiniteLattice::chain(3);
        let f = Homomorphism::new(&c2, &c3, vec![0, 2]).unwrap();
        let r = check_cover01(&f).unwrap();
        assert!(!r.is_cover01 && r.is_embedding && !r.lengths_equal);
    }

    #[test]
    fn non_semimodular_rejected() {
        // N5
        let n5 = crate::build_lattice(
            ["0", "a", "b", "c", "1"],
            [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")],
        )
        .unwrap();
        assert_eq!(check_cover01(&Homomorphism::identity(&n5)).unwrap_err(), Error::NotSemimodular);
    }

    #[test]
    fn non_homomorphism_rejected() {
        let b2 = make_grid(&[2, 2]).unwrap().into_lattice();
        let c2 = FiniteLattice::chain(2);
        // Sends both atoms to 0 but the top to 1: joins break.
        let map = b2.elements().map(|x| usize::from(x == b2.top())).collect();
        assert!(matches!(Homomorphism::new(&b2, &c2, map), Err(Error::NotAHomomorphism(_))));
    }

    #[test]
    fn kernel_blocks() {
        let c3 = FiniteLattice::chain(3);
        let f = Homomorphism::new(&c3, &c3, vec![0, 0, 2]).unwrap();
        let k = f.kernel();
        assert_eq!(k.blocks(), &[vec![0, 1], vec![2]]);
        assert!(k.is_compatible() && k.blocks_are_convex_sublattices());
        assert!(f.is_retraction_onto(&[0, 2]));
    }

    #[test]
    fn intersection_of_kernels() {
        let g = make_grid(&[3, 2]).unwrap();
        let l = g.lattice();
        let a = Congruence::from_labels(l, &l.elements().map(|x| g.coords(x)[0]).collect::<Vec<_>>()).unwrap();
        let b = Congruence::from_labels(l, &l.elements().map(|x| g.coords(x)[1]).collect::<Vec<_>>()).unwrap();
        let both = a.intersect(&b).unwrap();
        assert!(both.is_diagonal());
        assert!(both.num_blocks() <= a.num_blocks() * b.num_blocks());
    }
}

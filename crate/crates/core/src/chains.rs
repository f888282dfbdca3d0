//! Chain covers, width and the order dimension of finite distributive lattices.
//!
//! Minimum chain covers come from a maximum matching in the split bipartite
//! graph of the strict order (`u` on the left joined to `v` on the right when
//! `u < v`): every matched edge links two consecutive chain members, so the
//! cover has `|P| − |matching|` chains. König's theorem turns the same
//! matching into a maximum antichain, which certifies minimality.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{verify_equal_length_embedding, Grid};
use crate::lattice::FiniteLattice;

/// A cover of a subposet of a lattice by chains, each listed bottom first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainDecomposition {
    pub ambient: Vec<usize>,
    pub chains: Vec<Vec<usize>>,
    /// An antichain of the ambient poset; a minimum cover has exactly this many chains.
    pub antichain: Vec<usize>,
}

impl ChainDecomposition {
    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }
}

/// Dilworth decomposition of `elements` (a subposet of `lattice`).
pub fn min_chain_cover(lattice: &FiniteLattice, elements: &[usize]) -> ChainDecomposition {
    let mut ambient = elements.to_vec();
    ambient.sort_unstable();
    ambient.dedup();
    let n = ambient.len();
    let succ: Vec<Vec<usize>> =
        (0..n).map(|i| (0..n).filter(|&j| lattice.lt(ambient[i], ambient[j])).collect()).collect();

    let mut match_right: Vec<Option<usize>> = vec![None; n];
    let mut match_left: Vec<Option<usize>> = vec![None; n];
    for u in 0..n {
        let mut seen = vec![false; n];
        augment(u, &succ, &mut seen, &mut match_left, &mut match_right);
    }

    let mut chains: Vec<Vec<usize>> = (0..n)
        .filter(|&v| match_right[v].is_none())
        .map(|start| {
            let mut chain = vec![ambient[start]];
            let mut cur = start;
            while let Some(next) = match_left[cur] {
                chain.push(ambient[next]);
                cur = next;
            }
            chain
        })
        .collect();
    chains.sort_by_key(|c| *c.iter().min().unwrap());

    // König: Z = vertices reachable from unmatched left vertices along
    // alternating paths; {x : left(x) ∈ Z, right(x) ∉ Z} is a maximum antichain.
    let mut left_z = vec![false; n];
    let mut right_z = vec![false; n];
    let mut stack: Vec<usize> = (0..n).filter(|&u| match_left[u].is_none()).collect();
    stack.iter().for_each(|&u| left_z[u] = true);
    while let Some(u) = stack.pop() {
        for &v in &succ[u] {
            if !right_z[v] {
                right_z[v] = true;
                if let Some(w) = match_right[v] {
                    if !left_z[w] {
                        left_z[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
    }
    let antichain = (0..n).filter(|&x| left_z[x] && !right_z[x]).map(|x| ambient[x]).collect();
    ChainDecomposition { ambient, chains, antichain }
}

fn augment(
    u: usize,
    succ: &[Vec<usize>],
    seen: &mut [bool],
    match_left: &mut [Option<usize>],
    match_right: &mut [Option<usize>],
) -> bool {
    for &v in &succ[u] {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        if match_right[v].is_none_or(|w| augment(w, succ, seen, match_left, match_right)) {
            match_right[v] = Some(u);
            match_left[u] = Some(v);
            return true;
        }
    }
    false
}

/// Maximum antichain size of a subposet.
pub fn width(lattice: &FiniteLattice, elements: &[usize]) -> usize {
    min_chain_cover(lattice, elements).len()
}

/// `E_1 := C_1`, `E_i := C_i ∖ (C_1 ∪ ⋯ ∪ C_{i−1})`.
pub fn disjointify_chains(d: &ChainDecomposition) -> Result<ChainDecomposition> {
    let mut used: Vec<usize> = Vec::new();
    let mut chains = Vec::with_capacity(d.chains.len());
    for (i, c) in d.chains.iter().enumerate() {
        let e: Vec<usize> = c.iter().copied().filter(|x| !used.contains(x)).collect();
        if e.is_empty() {
            return Err(Error::EmptyChainProduced(i));
        }
        used.extend(&e);
        chains.push(e);
    }
    Ok(ChainDecomposition { ambient: d.ambient.clone(), chains, antichain: d.antichain.clone() })
}

/// Order dimension of a nontrivial finite distributive lattice: `width(Ji D)`.
pub fn order_dimension(d: &FiniteLattice) -> Result<usize> {
    if !d.is_distributive() {
        return Err(Error::NotDistributive);
    }
    if d.len() < 2 {
        return Err(Error::TrivialLattice);
    }
    Ok(width(d, &d.join_irreducibles()))
}

/// Cover-preserving {0,1}-embedding of a distributive lattice into a grid of
/// the same dimension and length.
#[derive(Clone, Debug)]
pub struct GridEmbedding {
    pub source: FiniteLattice,
    pub target: Grid,
    /// `map[x]` is the target element `(x_1, …, x_n)`.
    pub map: Vec<usize>,
    /// The chains `E_i^+ = E_i ∪ {0}`, bottom first; axis `i` of the target is labelled by them.
    pub coordinate_chains: Vec<Vec<usize>>,
}

impl GridEmbedding {
    /// Coordinates of `x`: `x_i` is the largest element of `E_i^+ ∩ ↓x`.
    pub fn coordinates(&self, x: usize) -> Vec<usize> {
        self.target.coords(self.map[x]).iter().zip(&self.coordinate_chains).map(|(&k, c)| c[k]).collect()
    }

    /// Whether the embedding is onto, i.e. the source is itself a grid.
    pub fn is_bijective(&self) -> bool {
        self.source.len() == self.target.lattice().len()
    }
}

pub fn grid_embed(d: &FiniteLattice) -> Result<GridEmbedding> {
    order_dimension(d)?;
    let cover = min_chain_cover(d, &d.join_irreducibles());
    let disjoint = disjointify_chains(&cover)?;
    let coordinate_chains: Vec<Vec<usize>> = disjoint
        .chains
        .iter()
        .map(|e| {
            let mut c = Vec::with_capacity(e.len() + 1);
            c.push(d.bottom());
            c.extend(e);
            c.sort_by_key(|&x| d.height(x));
            c
        })
        .collect();
    let labels = coordinate_chains.iter().map(|c| c.iter().map(|&x| d.id(x).to_string()).collect()).collect();
    let target = Grid::with_labels(labels)?;

    let map: Vec<usize> = d
        .elements()
        .map(|x| {
            let coords: Vec<usize> =
                coordinate_chains.iter().map(|c| c.iter().rposition(|&y| d.leq(y, x)).unwrap()).collect();
            target.element(&coords).unwrap()
        })
        .collect();
    verify_equal_length_embedding(d, target.lattice(), &map)?;
    Ok(GridEmbedding { source: d.clone(), target, map, coordinate_chains })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_lattice, canonical_s7};

    /// B2 with a new top `t` above its old top `1`.
    pub(crate) fn d5() -> FiniteLattice {
        build_lattice(["0", "p", "q", "1", "t"], [("0", "p"), ("0", "q"), ("p", "1"), ("q", "1"), ("1", "t")]).unwrap()
    }

    fn antichain3() -> (FiniteLattice, Vec<usize>) {
        let b3 = FiniteLattice::product(&[&FiniteLattice::chain(2), &FiniteLattice::chain(2), &FiniteLattice::chain(2)]);
        let atoms = b3.atoms();
        (b3, atoms)
    }

    #[test]
    fn antichain_cover() {
        let (b3, atoms) = antichain3();
        let d = min_chain_cover(&b3, &atoms);
        assert_eq!(d.len(), 3);
        assert_eq!(d.antichain.len(), 3);
        assert!(d.chains.iter().all(|c| c.len() == 1));
    }

    #[test]
    fn chain_cover_of_chain() {
        let c5 = FiniteLattice::chain(5);
        let all: Vec<usize> = c5.elements().collect();
        let d = min_chain_cover(&c5, &all);
        assert_eq!(d.chains, vec![all]);
        assert_eq!(d.antichain.len(), 1);
    }

    #[test]
    fn d5_join_irreducibles() {
        let l = d5();
        let ji = l.join_irreducibles();
        let d = min_chain_cover(&l, &ji);
        let names: Vec<Vec<&str>> = d.chains.iter().map(|c| c.iter().map(|&x| l.id(x)).collect()).collect();
        assert_eq!(names, vec![vec!["p", "t"], vec!["q"]]);
        assert_eq!(d.antichain.len(), 2);
    }

    #[test]
    fn disjointify_overlapping() {
        let l = d5();
        let [p, q, t] = [l.index_of("p").unwrap(), l.index_of("q").unwrap(), l.index_of("t").unwrap()];
        let d = ChainDecomposition { ambient: vec![p, q, t], chains: vec![vec![p, t], vec![q, t]], antichain: vec![p, q] };
        let e = disjointify_chains(&d).unwrap();
        assert_eq!(e.chains, vec![vec![p, t], vec![q]]);

        let disjoint = ChainDecomposition { chains: vec![vec![p, t], vec![q]], ..d.clone() };
        assert_eq!(disjointify_chains(&disjoint).unwrap(), disjoint);

        let dup = ChainDecomposition { ambient: vec![p], chains: vec![vec![p], vec![p]], antichain: vec![p] };
        assert_eq!(disjointify_chains(&dup).unwrap_err(), Error::EmptyChainProduced(1));
    }

    #[test]
    fn dimensions() {
        assert_eq!(order_dimension(&FiniteLattice::chain(5)).unwrap(), 1);
        assert_eq!(order_dimension(&antichain3().0).unwrap(), 3);
        let g = FiniteLattice::product(&[&FiniteLattice::chain(3), &FiniteLattice::chain(2)]);
        assert_eq!(order_dimension(&g).unwrap(), 2);
        assert_eq!(order_dimension(&canonical_s7()).unwrap_err(), Error::NotDistributive);
        assert_eq!(order_dimension(&FiniteLattice::chain(1)).unwrap_err(), Error::TrivialLattice);
    }

    #[test]
    fn embed_grid_is_onto_itself() {
        let g = FiniteLattice::product(&[&FiniteLattice::chain(3), &FiniteLattice::chain(2)]);
        let e = grid_embed(&g).unwrap();
        assert_eq!(e.target.sizes().iter().product::<usize>(), 6);
        assert!(e.is_bijective());
    }

    #[test]
    fn embed_d5() {
        let l = d5();
        let e = grid_embed(&l).unwrap();
        assert_eq!(e.target.sizes(), vec![3, 2]);
        let image: Vec<(&str, &str)> = ["0", "p", "q", "1", "t"]
            .iter()
            .map(|&x| (x, e.target.lattice().id(e.map[l.index_of(x).unwrap()])))
            .collect();
        assert_eq!(
            image,
            vec![("0", "(0,0)"), ("p", "(p,0)"), ("q", "(0,q)"), ("1", "(p,q)"), ("t", "(t,q)")]
        );
        for x in l.elements() {
            assert_eq!(l.join_all(e.coordinates(x)), x);
        }
    }

    #[test]
    fn embed_rejects_s7() {
        assert_eq!(grid_embed(&canonical_s7()).unwrap_err(), Error::NotDistributive);
    }
}

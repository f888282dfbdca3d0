//! Backtracking search for lattice homomorphisms with join/meet propagation.
//!
//! Every assignment `x ↦ v` forces `x ∨ y ↦ v ∨ f(y)` and `x ∧ y ↦ v ∧ f(y)`
//! for every already assigned `y`, and narrows the domains of elements
//! comparable to `x` to the matching principal ideal or filter of `v`.
//! Forced singletons are assigned immediately, so most branches die without
//! any guessing.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::lattice::FiniteLattice;
use crate::retract::Homomorphism;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    First,
    Count,
}

/// Result of [`exists_retraction`].
#[derive(Clone, Debug)]
pub struct RetractionSearch {
    /// The first retraction found (as an endomorphism of `B`), if any.
    pub retraction: Option<Homomorphism>,
    /// Number of retractions; exact in count mode, 0 or 1 in first mode.
    pub count: u64,
    /// Assignments tried.
    pub nodes: u64,
}

#[derive(Clone)]
struct State {
    value: Vec<Option<usize>>,
    domain: Vec<FixedBitSet>,
    assigned: Vec<usize>,
}

struct Search<'a> {
    src: &'a FiniteLattice,
    tgt: &'a FiniteLattice,
    injective: bool,
    priority: Vec<usize>,
    down: Vec<FixedBitSet>,
    up: Vec<FixedBitSet>,
    nodes: u64,
}

impl<'a> Search<'a> {
    fn new(src: &'a FiniteLattice, tgt: &'a FiniteLattice, injective: bool) -> Self {
        let m = tgt.len();
        let mask = |pred: &dyn Fn(usize) -> bool| {
            let mut b = FixedBitSet::with_capacity(m);
            (0..m).filter(|&y| pred(y)).for_each(|y| b.insert(y));
            b
        };
        let down = tgt.elements().map(|v| mask(&|y| tgt.leq(y, v))).collect();
        let up = tgt.elements().map(|v| mask(&|y| tgt.leq(v, y))).collect();
        // Static tie-break: larger cover degree first.
        let mut by_degree: Vec<usize> = src.elements().collect();
        by_degree.sort_by_key(|&x| std::cmp::Reverse(src.lower_covers(x).len() + src.upper_covers(x).len()));
        let mut priority = vec![0; src.len()];
        for (rank, &x) in by_degree.iter().enumerate() {
            priority[x] = rank;
        }
        Self { src, tgt, injective, priority, down, up, nodes: 0 }
    }

    fn initial(&self, domain: FixedBitSet) -> State {
        State { value: vec![None; self.src.len()], domain: vec![domain; self.src.len()], assigned: Vec::new() }
    }

    fn assign(&self, st: &mut State, x: usize, v: usize) -> bool {
        let (src, tgt) = (self.src, self.tgt);
        let mut queue = vec![(x, v)];
        while let Some((x, v)) = queue.pop() {
            if let Some(w) = st.value[x] {
                if w != v {
                    return false;
                }
                continue;
            }
            if !st.domain[x].contains(v) {
                return false;
            }
            st.value[x] = Some(v);
            st.domain[x].clear();
            st.domain[x].insert(v);
            st.assigned.push(x);

            for i in 0..st.assigned.len() {
                let y = st.assigned[i];
                let fy = st.value[y].unwrap();
                for (z, want) in [(src.join(x, y), tgt.join(v, fy)), (src.meet(x, y), tgt.meet(v, fy))] {
                    match st.value[z] {
                        Some(w) if w != want => return false,
                        Some(_) => {}
                        None if !st.domain[z].contains(want) => return false,
                        None => queue.push((z, want)),
                    }
                }
            }
            for z in src.elements() {
                if st.value[z].is_some() {
                    continue;
                }
                let before = st.domain[z].count_ones(..);
                if src.leq(z, x) {
                    st.domain[z].intersect_with(&self.down[v]);
                }
                if src.leq(x, z) {
                    st.domain[z].intersect_with(&self.up[v]);
                }
                if self.injective {
                    st.domain[z].set(v, false);
                }
                let after = st.domain[z].count_ones(..);
                if after == 0 {
                    return false;
                }
                if after == 1 && before > 1 {
                    queue.push((z, st.domain[z].ones().next().unwrap()));
                }
            }
        }
        true
    }

    /// Depth-first enumeration; `visit` returns `false` to stop.
    fn run(&mut self, st: State, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let next = self
            .src
            .elements()
            .filter(|&x| st.value[x].is_none())
            .min_by_key(|&x| (st.domain[x].count_ones(..), self.priority[x]));
        let Some(x) = next else {
            let map: Vec<usize> = st.value.iter().map(|v| v.unwrap()).collect();
            return visit(&map);
        };
        for v in st.domain[x].ones() {
            self.nodes += 1;
            let mut child = st.clone();
            if self.assign(&mut child, x, v) && !self.run(child, visit) {
                return false;
            }
        }
        true
    }
}

/// Searches for retractions of `b` onto its sublattice `a`.
pub fn exists_retraction(b: &FiniteLattice, a: &[usize], mode: SearchMode) -> Result<RetractionSearch> {
    if !b.check_sublattice(a) {
        return Err(Error::NotASublattice);
    }
    let mut search = Search::new(b, b, false);
    let mut mask = FixedBitSet::with_capacity(b.len());
    a.iter().for_each(|&x| mask.insert(x));
    let mut st = search.initial(mask);
    for &x in a {
        if !search.assign(&mut st, x, x) {
            return Ok(RetractionSearch { retraction: None, count: 0, nodes: search.nodes });
        }
    }
    let mut first = None;
    let mut count = 0u64;
    search.run(st, &mut |map| {
        count += 1;
        if first.is_none() {
            first = Some(map.to_vec());
        }
        mode == SearchMode::Count
    });
    let retraction = first.map(|m| Homomorphism::new(b, b, m)).transpose()?;
    Ok(RetractionSearch { retraction, count, nodes: search.nodes })
}

/// Calls `visit` with every lattice homomorphism `src → tgt`; stops early
/// when `visit` returns `false`. Returns the number of search nodes.
pub fn for_each_homomorphism(src: &FiniteLattice, tgt: &FiniteLattice, mut visit: impl FnMut(&[usize]) -> bool) -> u64 {
    let mut search = Search::new(src, tgt, false);
    let mut full = FixedBitSet::with_capacity(tgt.len());
    full.insert_range(..);
    let st = search.initial(full);
    search.run(st, &mut visit);
    search.nodes
}

/// Calls `visit` with every lattice embedding `small → big`.
pub fn for_each_embedding(small: &FiniteLattice, big: &FiniteLattice, mut visit: impl FnMut(&[usize]) -> bool) -> u64 {
    if small.len() > big.len() {
        return 0;
    }
    let mut search = Search::new(small, big, true);
    let mut full = FixedBitSet::with_capacity(big.len());
    full.insert_range(..);
    let st = search.initial(full);
    search.run(st, &mut visit);
    search.nodes
}

pub fn find_embedding(small: &FiniteLattice, big: &FiniteLattice) -> Option<Vec<usize>> {
    let mut found = None;
    for_each_embedding(small, big, |m| {
        found = Some(m.to_vec());
        false
    });
    found
}

pub fn find_isomorphism(a: &FiniteLattice, b: &FiniteLattice) -> Option<Vec<usize>> {
    if a.len() != b.len() || a.cover_pairs().count() != b.cover_pairs().count() {
        return None;
    }
    find_embedding(a, b)
}

pub fn are_isomorphic(a: &FiniteLattice, b: &FiniteLattice) -> bool {
    find_isomorphism(a, b).is_some()
}

/// Distinct images of `small` in `big`: the sublattices of `big` isomorphic to `small`.
pub fn sublattice_copies(small: &FiniteLattice, big: &FiniteLattice) -> Vec<Vec<usize>> {
    let mut images = BTreeSet::new();
    for_each_embedding(small, big, |m| {
        let mut img = m.to_vec();
        img.sort_unstable();
        images.insert(img);
        true
    });
    images.into_iter().collect()
}

/// Every sublattice of `l`, as sorted index sets.
pub fn all_sublattices(l: &FiniteLattice) -> Vec<Vec<usize>> {
    assert!(l.len() <= 20, "subset enumeration is limited to 20 elements");
    (1u32..1 << l.len())
        .map(|mask| l.elements().filter(|&x| mask >> x & 1 == 1).collect::<Vec<_>>())
        .filter(|s| l.check_sublattice(s))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn three_chain_onto_ends() {
        let c3 = FiniteLattice::chain(3);
        let r = exists_retraction(&c3, &[0, 2], SearchMode::Count).unwrap();
        assert_eq!(r.count, 2);
        assert!(r.retraction.unwrap().is_retraction_onto(&[0, 2]));
    }

    #[test]
    fn square_onto_chain_has_none() {
        let b2 = make_grid(&[2, 2]).unwrap().into_lattice();
        let chain = b2.indices_of(&["(0,0)", "(1,0)", "(1,1)"]).unwrap();
        let r = exists_retraction(&b2, &chain, SearchMode::Count).unwrap();
        assert_eq!(r.count, 0);
        assert!(r.retraction.is_none());
    }

    #[test]
    fn whole_lattice_only_identity() {
        let g = make_grid(&[3, 2]).unwrap().into_lattice();
        let all: Vec<usize> = g.elements().collect();
        let r = exists_retraction(&g, &all, SearchMode::Count).unwrap();
        assert_eq!(r.count, 1);
        assert_eq!(r.retraction.unwrap(), Homomorphism::identity(&g));
    }

    #[test]
    fn non_sublattice_rejected() {
        let b2 = make_grid(&[2, 2]).unwrap().into_lattice();
        assert_eq!(exists_retraction(&b2, &b2.atoms(), SearchMode::First).unwrap_err(), Error::NotASublattice);
    }

    #[test]
    fn homomorphism_counts_between_chains() {
        // Order-preserving maps C3 → C2 are lattice homomorphisms: 4 of them.
        let mut n = 0;
        for_each_homomorphism(&FiniteLattice::chain(3), &FiniteLattice::chain(2), |_| {
            n += 1;
            true
        });
        assert_eq!(n, 4);
    }

    #[test]
    fn copies_of_square_in_three_by_three() {
        let g = make_grid(&[3, 3]).unwrap().into_lattice();
        let b2 = make_grid(&[2, 2]).unwrap().into_lattice();
        // Choose two of three levels on each axis: 3 · 3 = 9 squares.
        assert_eq!(sublattice_copies(&b2, &g).len(), 9);
    }

    #[test]
    fn isomorphism_detects_relabelling() {
        let g = make_grid(&[3, 2]).unwrap().into_lattice();
        let h = make_grid(&[2, 3]).unwrap().into_lattice();
        assert!(are_isomorphic(&g, &h));
        assert!(!are_isomorphic(&g, &FiniteLattice::chain(6)));
    }
}

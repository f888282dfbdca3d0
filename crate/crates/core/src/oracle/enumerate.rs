//! Isomorph-free generation of small lattices.
//!
//! The primary generator walks naturally labelled posets on the inner
//! elements (every new element picks a down-closed set of earlier ones as its
//! strict down-set), bounds them by `0` and `1`, keeps the lattices and
//! rejects isomorphs through a canonical form. A second, independent
//! generator works from arbitrary transitively closed relations and rejects
//! isomorphs by direct search; the two are compared at small sizes.
//!
//! Distributive lattices are generated through their posets of
//! join-irreducibles, pruned by down-set count, which reaches further sizes.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lattice::FiniteLattice;
use crate::oracle::search::are_isomorphic;

pub const DEFAULT_CEILING: usize = 8;
pub const DISTRIBUTIVE_CEILING: usize = 12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LatticeFilter {
    pub distributive: bool,
    pub semimodular: bool,
    pub slim: bool,
}

impl LatticeFilter {
    pub fn any() -> Self {
        Self::default()
    }

    pub fn distributive() -> Self {
        Self { distributive: true, ..Self::default() }
    }

    pub fn slim_semimodular() -> Self {
        Self { semimodular: true, slim: true, ..Self::default() }
    }

    pub fn accepts(&self, l: &FiniteLattice) -> bool {
        (!self.distributive || l.is_distributive())
            && (!self.semimodular || l.is_semimodular())
            && (!self.slim || l.is_slim())
    }
}

/// Lattices with at most `max_size` elements passing `filter`, pairwise
/// non-isomorphic, ordered by size and then by canonical code.
pub fn enumerate_small_lattices(max_size: usize, filter: LatticeFilter) -> Result<Vec<FiniteLattice>> {
    let ceiling = if filter.distributive { DISTRIBUTIVE_CEILING } else { DEFAULT_CEILING };
    if max_size > ceiling {
        return Err(Error::CeilingExceeded { requested: max_size, ceiling });
    }
    if filter.distributive {
        return Ok(distributive_lattices(max_size).into_iter().filter(|l| filter.accepts(l)).collect());
    }
    Ok((1..=max_size).flat_map(lattices_of_size).filter(|l| filter.accepts(l)).collect())
}

/// Order relation on `0..n` as rows of bitmasks: bit `j` of `rows[i]` is `i ≤ j`.
type Rows = Vec<u64>;

fn rows_of(n: usize, leq: impl Fn(usize, usize) -> bool) -> Rows {
    (0..n).map(|i| (0..n).filter(|&j| leq(i, j)).fold(0u64, |m, j| m | 1 << j)).collect()
}

/// Minimum row encoding over all relabellings that respect a vertex
/// invariant; equal for isomorphic orders. Also returns the relabelling
/// (`order[k]` is the element placed at position `k`).
fn canonical_rows(rows: &Rows) -> (Rows, Vec<usize>) {
    let n = rows.len();
    let down = |x: usize| (0..n).filter(|&y| rows[y] >> x & 1 == 1).count();
    let up = |x: usize| rows[x].count_ones() as usize;
    let covers = |x: usize| {
        let lower = (0..n).filter(|&y| y != x && rows[y] >> x & 1 == 1).filter(|&y| {
            !(0..n).any(|z| z != x && z != y && rows[y] >> z & 1 == 1 && rows[z] >> x & 1 == 1)
        });
        lower.count()
    };
    let base: Vec<(usize, usize, usize)> = (0..n).map(|x| (down(x), up(x), covers(x))).collect();
    let key = |x: usize| {
        let mut below: Vec<_> = (0..n).filter(|&y| y != x && rows[y] >> x & 1 == 1).map(|y| base[y]).collect();
        below.sort_unstable();
        (base[x], below)
    };
    let mut sorted: Vec<usize> = (0..n).collect();
    let keys: Vec<_> = (0..n).map(key).collect();
    sorted.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &x in &sorted {
        match classes.last_mut() {
            Some(c) if keys[c[0]] == keys[x] => c.push(x),
            _ => classes.push(vec![x]),
        }
    }

    let mut best: Option<(Rows, Vec<usize>)> = None;
    let mut order = Vec::with_capacity(n);
    permute_classes(&classes, 0, &mut order, &mut vec![false; n], &mut |order| {
        let mut pos = vec![0; n];
        order.iter().enumerate().for_each(|(k, &x)| pos[x] = k);
        let code: Rows = order
            .iter()
            .map(|&x| (0..n).filter(|&y| rows[x] >> y & 1 == 1).fold(0u64, |m, y| m | 1 << pos[y]))
            .collect();
        if best.as_ref().is_none_or(|(b, _)| code < *b) {
            best = Some((code, order.to_vec()));
        }
    });
    best.expect("at least one relabelling")
}

fn permute_classes(
    classes: &[Vec<usize>],
    class: usize,
    order: &mut Vec<usize>,
    used: &mut Vec<bool>,
    visit: &mut dyn FnMut(&[usize]),
) {
    let Some(c) = classes.get(class) else {
        visit(order);
        return;
    };
    let placed = c.iter().filter(|&&x| used[x]).count();
    if placed == c.len() {
        return permute_classes(classes, class + 1, order, used, visit);
    }
    for &x in c {
        if !used[x] {
            used[x] = true;
            order.push(x);
            permute_classes(classes, class, order, used, visit);
            order.pop();
            used[x] = false;
        }
    }
}

fn lattice_from_canonical(rows: &Rows) -> FiniteLattice {
    let n = rows.len();
    let ids: Vec<String> = (0..n)
        .map(|k| match k {
            0 => "0".to_string(),
            k if k == n - 1 => "1".to_string(),
            k => char::from(b'a' + (k - 1) as u8).to_string(),
        })
        .collect();
    FiniteLattice::from_order(ids, |i, j| rows[i] >> j & 1 == 1).expect("generated orders are lattices")
}

/// Canonical code of a lattice; two lattices are isomorphic iff their codes agree.
pub fn canonical_code(l: &FiniteLattice) -> Vec<u64> {
    canonical_rows(&rows_of(l.len(), |i, j| l.leq(i, j))).0
}

/// `l` relabelled into the generator's standard form.
pub fn canonical_lattice(l: &FiniteLattice) -> FiniteLattice {
    lattice_from_canonical(&canonical_code(l))
}

fn is_lattice(rows: &Rows) -> bool {
    let n = rows.len();
    (0..n).all(|x| {
        (x + 1..n).all(|y| {
            let ub = rows[x] & rows[y];
            (0..n).any(|u| ub >> u & 1 == 1 && rows[u] & ub == ub)
        })
    })
}

/// Bounds a naturally labelled poset on `m` inner elements, given as strict
/// down-set masks, by a new `0` and `1`.
fn bounded(down: &[u64]) -> Rows {
    let m = down.len();
    let n = m + 2;
    let mut rows = vec![0u64; n];
    rows[0] = (1 << n) - 1;
    rows[n - 1] = 1 << (n - 1);
    for (i, &d) in down.iter().enumerate() {
        rows[i + 1] |= 1 << (i + 1) | 1 << (n - 1);
        for j in 0..m {
            if d >> j & 1 == 1 {
                rows[j + 1] |= 1 << (i + 1);
            }
        }
    }
    rows
}

/// Calls `visit` on every nonempty naturally labelled poset with at most `m`
/// elements; a `false` return prunes the extensions of that poset.
fn natural_posets(m: usize, down: &mut Vec<u64>, visit: &mut dyn FnMut(&[u64]) -> bool) {
    let k = down.len();
    if k == m {
        return;
    }
    for d in 0u64..1 << k {
        let closed = (0..k).all(|j| d >> j & 1 == 0 || down[j] & !d == 0);
        if closed {
            down.push(d);
            if visit(down) {
                natural_posets(m, down, visit);
            }
            down.pop();
        }
    }
}

/// All lattices with exactly `n` elements (`n ≤ DEFAULT_CEILING`), via
/// naturally labelled posets and canonical forms.
pub fn lattices_of_size(n: usize) -> Vec<FiniteLattice> {
    assert!((1..=DEFAULT_CEILING).contains(&n), "size out of range");
    if n <= 2 {
        return vec![lattice_from_canonical(&rows_of(n, |i, j| i <= j))];
    }
    let mut found: BTreeMap<Rows, ()> = BTreeMap::new();
    natural_posets(n - 2, &mut Vec::new(), &mut |down| {
        if down.len() == n - 2 {
            let rows = bounded(down);
            if is_lattice(&rows) {
                found.insert(canonical_rows(&rows).0, ());
            }
        }
        true
    });
    found.keys().map(lattice_from_canonical).collect()
}

/// All lattices with exactly `n` elements, from every transitively closed
/// relation on the inner elements compatible with their index order,
/// deduplicated by isomorphism search.
pub fn lattices_of_size_by_pairs(n: usize) -> Vec<FiniteLattice> {
    assert!((1..=7).contains(&n), "size out of range");
    if n <= 2 {
        return vec![lattice_from_canonical(&rows_of(n, |i, j| i <= j))];
    }
    let m = n - 2;
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let mut out: Vec<FiniteLattice> = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let less = |i: usize, j: usize| pairs.iter().position(|&p| p == (i, j)).is_some_and(|k| mask >> k & 1 == 1);
        let transitive = (0..m).all(|i| (i + 1..m).all(|j| !less(i, j) || (j + 1..m).all(|k| !less(j, k) || less(i, k))));
        if !transitive {
            continue;
        }
        let rows = rows_of(n, |i, j| {
            i == j || i == 0 || j == n - 1 || (i < n - 1 && j > 0 && less(i - 1, j - 1))
        });
        if !is_lattice(&rows) {
            continue;
        }
        let ids: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
        let l = FiniteLattice::from_order(ids, |i, j| rows[i] >> j & 1 == 1).unwrap();
        if !out.iter().any(|k| are_isomorphic(k, &l)) {
            out.push(l);
        }
    }
    out
}

fn downset_count(down: &[u64]) -> usize {
    let k = down.len();
    (0u64..1 << k).filter(|&s| (0..k).all(|j| s >> j & 1 == 0 || down[j] & !s == 0)).count()
}

/// Distributive lattices with at most `max_size` elements, as down-set
/// lattices of posets.
fn distributive_lattices(max_size: usize) -> Vec<FiniteLattice> {
    if max_size == 0 {
        return Vec::new();
    }
    let mut found: BTreeMap<(usize, Rows), ()> = BTreeMap::new();
    found.insert((1, vec![1]), ());
    let mut record = |down: &[u64]| {
        let k = down.len();
        let sets: Vec<u64> = (0u64..1 << k).filter(|&s| (0..k).all(|j| s >> j & 1 == 0 || down[j] & !s == 0)).collect();
        let rows = rows_of(sets.len(), |a, b| sets[a] & !sets[b] == 0);
        found.insert((sets.len(), canonical_rows(&rows).0), ());
    };
    natural_posets(max_size.saturating_sub(1), &mut Vec::new(), &mut |down| {
        if downset_count(down) > max_size {
            return false;
        }
        record(down);
        true
    });
    found.keys().map(|(_, rows)| lattice_from_canonical(rows)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(max: usize, filter: LatticeFilter) -> Vec<usize> {
        let all = enumerate_small_lattices(max, filter).unwrap();
        (1..=max).map(|n| all.iter().filter(|l| l.len() == n).count()).collect()
    }

    #[test]
    fn general_counts() {
        assert_eq!(counts(8, LatticeFilter::any()), vec![1, 1, 1, 2, 5, 15, 53, 222]);
    }

    #[test]
    fn distributive_counts() {
        assert_eq!(counts(10, LatticeFilter::distributive()), vec![1, 1, 1, 2, 3, 5, 8, 15, 26, 47]);
    }

    #[test]
    fn four_or_fewer() {
        let all = enumerate_small_lattices(4, LatticeFilter::any()).unwrap();
        assert_eq!(all.len(), 5);
        assert_eq!(enumerate_small_lattices(1, LatticeFilter::any()).unwrap().len(), 1);
    }

    #[test]
    fn strategies_agree() {
        for n in 1..=6 {
            let a = lattices_of_size(n);
            let b = lattices_of_size_by_pairs(n);
            assert_eq!(a.len(), b.len(), "size {n}");
            assert!(b.iter().all(|l| a.iter().any(|k| are_isomorphic(k, l))));
        }
    }

    #[test]
    fn ceiling() {
        assert_eq!(
            enumerate_small_lattices(9, LatticeFilter::any()).unwrap_err(),
            Error::CeilingExceeded { requested: 9, ceiling: 8 }
        );
    }

    #[test]
    fn canonical_code_is_invariant() {
        let g = FiniteLattice::product(&[&FiniteLattice::chain(3), &FiniteLattice::chain(2)]);
        let h = FiniteLattice::product(&[&FiniteLattice::chain(2), &FiniteLattice::chain(3)]);
        assert_eq!(canonical_code(&g), canonical_code(&h));
        assert_ne!(canonical_code(&g), canonical_code(&FiniteLattice::chain(6)));
        assert_eq!(canonical_lattice(&g).ids(), &["0", "1", "a", "b", "c", "d"]);
    }
}

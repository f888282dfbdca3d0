//! n-dimensional grids: direct products of nontrivial finite chains.
//!
//! Elements are coordinate tuples; axis `i` carries labels `labels[i][0] <
//! labels[i][1] < …` and an element's identifier is `(l_1,…,l_n)`. The
//! canonical chain `C_i` is the set of tuples that are zero off axis `i`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::lattice::FiniteLattice;

#[derive(Clone, Debug)]
pub struct Grid {
    labels: Vec<Vec<String>>,
    lattice: FiniteLattice,
    coords: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
}

/// The grid `C_{sizes[0]} × ⋯ × C_{sizes[n-1]}` with numeric axis labels.
pub fn make_grid(sizes: &[usize]) -> Result<Grid> {
    let labels = sizes
        .iter()
        .map(|&s| {
            let width = (s.max(1) - 1).to_string().len();
            (0..s).map(|i| format!("{i:0width$}")).collect()
        })
        .collect();
    Grid::with_labels(labels)
}

impl Grid {
    /// Grid whose `i`-th axis is the chain `labels[i]`, listed bottom to top.
    pub fn with_labels(labels: Vec<Vec<String>>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::NoFactors);
        }
        if let Some((index, axis)) = labels.iter().enumerate().find(|(_, a)| a.len() < 2) {
            return Err(Error::TrivialFactor { index, size: axis.len() });
        }
        let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
        for axis in &labels {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    (0..axis.len()).map(move |i| {
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
                let parts: Vec<&str> = t.iter().zip(&labels).map(|(&i, axis)| axis[i].as_str()).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        let lattice = FiniteLattice::from_order(ids.clone(), |a, b| tuples[a].iter().zip(&tuples[b]).all(|(x, y)| x <= y))?;
        let mut coords = vec![Vec::new(); tuples.len()];
        let mut lookup = HashMap::with_capacity(tuples.len());
        for (t, id) in tuples.into_iter().zip(&ids) {
            let x = lattice.index_of(id).expect("identifier present");
            lookup.insert(t.clone(), x);
            coords[x] = t;
        }
        Ok(Self { labels, lattice, coords, lookup })
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn into_lattice(self) -> FiniteLattice {
        self.lattice
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.labels.iter().map(Vec::len).collect()
    }

    pub fn labels(&self) -> &[Vec<String>] {
        &self.labels
    }

    pub fn dimension(&self) -> usize {
        self.labels.len()
    }

    pub fn is_boolean(&self) -> bool {
        self.labels.iter().all(|a| a.len() == 2)
    }

    pub fn coords(&self, x: usize) -> &[usize] {
        &self.coords[x]
    }

    /// Element with the given coordinates, if they are in range.
    pub fn element(&self, coords: &[usize]) -> Option<usize> {
        self.lookup.get(coords).copied()
    }

    /// `1_{C_i}`: the top of the `i`-th canonical chain.
    pub fn axis_top(&self, axis: usize) -> usize {
        let mut c = vec![0; self.dimension()];
        c[axis] = self.labels[axis].len() - 1;
        self.lookup[&c]
    }

    /// The canonical chain `C_i = ↓1_{C_i}`, bottom first.
    pub fn canonical_chain(&self, axis: usize) -> Vec<usize> {
        let mut c = vec![0; self.dimension()];
        (0..self.labels[axis].len())
            .map(|k| {
                c[axis] = k;
                self.lookup[&c]
            })
            .collect()
    }

    /// The projection `π_i: x ↦ x ∧ 1_{C_i}`.
    pub fn projection(&self, axis: usize, x: usize) -> usize {
        self.lattice.meet(x, self.axis_top(axis))
    }

    /// `(x^(1), …, x^(n))` with `x^(i) = x ∧ 1_{C_i}`.
    pub fn canonical_joinands(&self, x: usize) -> Vec<usize> {
        (0..self.dimension()).map(|i| self.projection(i, x)).collect()
    }

    /// Recovers the subchains `E_j ⊆ C_j` of a full-dimensional subgrid `sub`.
    ///
    /// Returns `E_j = { x^(j) : x ∈ sub }`, each bottom first, after checking
    /// that every `E_j` is nontrivial and that `sub` is exactly the set of
    /// elements whose canonical joinands lie in the `E_j`.
    pub fn recover_subgrid_chains(&self, sub: &[usize]) -> Result<Vec<Vec<usize>>> {
        let n = self.dimension();
        let l = &self.lattice;
        let mut chains: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &x in sub {
            for (j, chain) in chains.iter_mut().enumerate() {
                chain.push(self.projection(j, x));
            }
        }
        for chain in &mut chains {
            chain.sort_by_key(|&x| l.height(x));
            chain.dedup();
            if chain.len() < 2 {
                return Err(Error::NotASubgrid);
            }
        }
        let mut member = vec![false; l.len()];
        for &x in sub {
            member[x] = true;
        }
        let in_chain: Vec<Vec<bool>> = chains
            .iter()
            .map(|c| {
                let mut v = vec![false; l.len()];
                c.iter().for_each(|&x| v[x] = true);
                v
            })
            .collect();
        for x in l.elements() {
            let formula = (0..n).all(|j| in_chain[j][self.projection(j, x)]);
            if formula != member[x] {
                return Err(Error::NotASubgrid);
            }
        }
        Ok(chains)
    }
}

/// Splits the first factor with at least three elements at its coatom `q`.
///
/// For `L = C_1 × C'` with `|C_1| ≥ 3` the result is the grid
/// `K = {q, 1} × ↓q × C'` (one dimension higher, same length) together with
/// the embedding `L → K` that sends `(x, ȳ)` to `(q, x, ȳ)` when `x ≤ q` and
/// to `(x, q, ȳ)` when `x ≥ q`.
pub fn dimension_bump(grid: &Grid) -> Result<(Grid, Vec<usize>)> {
    let split = grid.labels.iter().position(|a| a.len() >= 3).ok_or(Error::BooleanInput)?;
    let axis = &grid.labels[split];
    let q = axis.len() - 2;

    let mut labels = Vec::with_capacity(grid.dimension() + 1);
    labels.extend_from_slice(&grid.labels[..split]);
    labels.push(vec![axis[q].clone(), axis[q + 1].clone()]);
    labels.push(axis[..=q].to_vec());
    labels.extend_from_slice(&grid.labels[split + 1..]);
    let bumped = Grid::with_labels(labels)?;

    let image = |c: &[usize]| -> Vec<usize> {
        let x = c[split];
        let (outer, inner) = if x <= q { (0, x) } else { (1, q) };
        let mut out = Vec::with_capacity(c.len() + 1);
        out.extend_from_slice(&c[..split]);
        out.push(outer);
        out.push(inner);
        out.extend_from_slice(&c[split + 1..]);
        out
    };
    let map: Vec<usize> = grid.lattice.elements().map(|x| bumped.lookup[&image(grid.coords(x))]).collect();

    // The image is the gluing of ↓(q,1̄) and ↑(q,0̄) over their intersection.
    let (l, k) = (&grid.lattice, &bumped.lattice);
    let mut lo = vec![0; grid.dimension()];
    lo[split] = q;
    let mut hi: Vec<usize> = grid.sizes().iter().map(|s| s - 1).collect();
    hi[split] = q;
    let (q_lo, q_hi) = (grid.lookup[&lo], grid.lookup[&hi]);
    let ideal: Vec<usize> = l.down_set(q_hi).into_iter().map(|x| map[x]).collect();
    let filter: Vec<usize> = l.up_set(q_lo).into_iter().map(|x| map[x]).collect();
    let overlap: Vec<usize> = ideal.iter().copied().filter(|x| filter.contains(x)).collect();
    let (ideal_l, ideal_back) = k.induced(&ideal)?;
    let (filter_l, filter_back) = k.induced(&filter)?;
    let pos = |back: &[usize], x: usize| back.iter().position(|&y| y == x).unwrap();
    let f1: Vec<usize> = overlap.iter().map(|&x| pos(&ideal_back, x)).collect();
    let i2: Vec<usize> = overlap.iter().map(|&x| pos(&filter_back, x)).collect();
    let psi: Vec<(usize, usize)> = f1.iter().copied().zip(i2.iter().copied()).collect();
    let glued = hall_dilworth_glue(&ideal_l, &f1, &filter_l, &i2, &psi)?;
    if glued.len() != l.len() || glued.length() != l.length() || glued.join_irreducibles().len() != l.join_irreducibles().len() {
        return Err(Error::ValidationFailed("gluing does not reproduce the grid".into()));
    }
    verify_equal_length_embedding(l, k, &map)?;
    Ok((bumped, map))
}

/// Hall–Dilworth gluing of `h1` and `h2` along `psi: F1 → I2`.
///
/// `psi` lists pairs `(x, psi(x))` with `x ∈ F1`, a filter of `h1`, and
/// `psi(x) ∈ I2`, an ideal of `h2`. Elements of `F1` keep their `h1`
/// identifiers; identifiers of `h2 ∖ I2` that clash with `h1` get primes
/// appended.
pub fn hall_dilworth_glue(
    h1: &FiniteLattice,
    f1: &[usize],
    h2: &FiniteLattice,
    i2: &[usize],
    psi: &[(usize, usize)],
) -> Result<FiniteLattice> {
    let mut in_f1 = vec![false; h1.len()];
    f1.iter().for_each(|&x| in_f1[x] = true);
    let mut in_i2 = vec![false; h2.len()];
    i2.iter().for_each(|&x| in_i2[x] = true);

    let is_filter = !f1.is_empty()
        && f1.iter().all(|&x| h1.up_set(x).into_iter().all(|y| in_f1[y]))
        && f1.iter().all(|&x| f1.iter().all(|&y| in_f1[h1.meet(x, y)]));
    if !is_filter {
        return Err(Error::NotAFilter);
    }
    let is_ideal = !i2.is_empty()
        && i2.iter().all(|&x| h2.down_set(x).into_iter().all(|y| in_i2[y]))
        && i2.iter().all(|&x| i2.iter().all(|&y| in_i2[h2.join(x, y)]));
    if !is_ideal {
        return Err(Error::NotAnIdeal);
    }

    let mut forward = vec![None; h1.len()];
    let mut backward = vec![None; h2.len()];
    for &(x, y) in psi {
        if !in_f1[x] || !in_i2[y] || forward[x].replace(y).is_some() || backward[y].replace(x).is_some() {
            return Err(Error::NotIsomorphism);
        }
    }
    if f1.iter().any(|&x| forward[x].is_none()) || i2.iter().any(|&y| backward[y].is_none()) {
        return Err(Error::NotIsomorphism);
    }
    for &(x, y) in psi {
        for &(u, v) in psi {
            if h1.leq(x, u) != h2.leq(y, v) {
                return Err(Error::NotIsomorphism);
            }
        }
    }

    #[derive(Clone, Copy)]
    enum Node {
        First(usize),
        Second(usize),
    }
    let mut nodes: Vec<Node> = h1.elements().map(Node::First).collect();
    nodes.extend(h2.elements().filter(|&y| !in_i2[y]).map(Node::Second));

    let mut taken: std::collections::HashSet<String> = h1.ids().iter().cloned().collect();
    let ids: Vec<String> = nodes
        .iter()
        .map(|n| match *n {
            Node::First(x) => h1.id(x).to_string(),
            Node::Second(y) => {
                let mut id = h2.id(y).to_string();
                while taken.contains(&id) {
                    id.push('\'');
                }
                taken.insert(id.clone());
                id
            }
        })
        .collect();

    let leq = |a: usize, b: usize| match (nodes[a], nodes[b]) {
        (Node::First(x), Node::First(y)) => h1.leq(x, y),
        (Node::Second(x), Node::Second(y)) => h2.leq(x, y),
        (Node::First(x), Node::Second(y)) => psi.iter().any(|&(z, w)| h1.leq(x, z) && h2.leq(w, y)),
        (Node::Second(x), Node::First(y)) => psi.iter().any(|&(z, w)| h2.leq(x, w) && h1.leq(z, y)),
    };
    FiniteLattice::from_order(ids, leq)
}

/// Checks that `map` is an injective lattice homomorphism sending 0, 1 and
/// covers to 0, 1 and covers, between lattices of equal length.
pub(crate) fn verify_equal_length_embedding(source: &FiniteLattice, target: &FiniteLattice, map: &[usize]) -> Result<()> {
    let fail = |what: &str| Err(Error::ValidationFailed(format!("embedding {what}")));
    for a in source.elements() {
        for b in source.elements() {
            if map[source.join(a, b)] != target.join(map[a], map[b]) || map[source.meet(a, b)] != target.meet(map[a], map[b]) {
                return fail("is not a homomorphism");
            }
            if a != b && map[a] == map[b] {
                return fail("is not injective");
            }
        }
    }
    if map[source.bottom()] != target.bottom() || map[source.top()] != target.top() {
        return fail("does not preserve bounds");
    }
    if !source.cover_pairs().all(|(a, b)| target.is_cover(map[a], map[b])) {
        return fail("does not preserve covers");
    }
    if source.length() != target.length() {
        return fail("changes the length");
    }
    Ok(())
}

//! A slim semimodular lattice with at least two elements is never an
//! absolute retract for its class: it sits inside a proper extension `K`,
//! built from `S7^(t)`, onto which no retraction exists.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::grid::make_grid;
use crate::lattice::FiniteLattice;
use crate::oracle::congruence::congruence_generated_by;
use crate::oracle::search::{exists_retraction, find_embedding, SearchMode};
use crate::retract::Homomorphism;
use crate::slim::{build_slim_rectangular, find_rectangular_extension, s7_family, Cell, ExtensionBounds, ForkScript, SlimDiagram};

/// Congruence generated by one pair of inner coatoms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SwingCheck {
    pub i: usize,
    pub j: usize,
    /// All inner coatoms and the top lie in one block.
    pub collapses: bool,
}

#[derive(Clone, Debug)]
pub struct WitnessReport {
    pub l: FiniteLattice,
    pub script: ForkScript,
    pub r: SlimDiagram,
    pub m: usize,
    pub n: usize,
    pub t: usize,
    pub k: SlimDiagram,
    /// `S7^(t)` before the mirrored forks.
    pub s7_size: usize,
    /// Inner coatoms `a_1 … a_t` of `S7^(t)`, as elements of `K`.
    pub inner_coatoms: Vec<usize>,
    pub b: usize,
    /// The grid `G'` in `K`, row `i` holding the elements `(i, 0) … (i, n)`.
    pub g_prime: Vec<Vec<usize>>,
    /// `L → K`; its image is `L'`.
    pub l_embedding: Vec<usize>,
    pub l_prime: Vec<usize>,
    pub retraction_found: bool,
    pub search_nodes: u64,
    pub swing: Vec<SwingCheck>,
}

impl WitnessReport {
    pub fn swing_holds(&self) -> bool {
        self.swing.iter().all(|s| s.collapses)
    }
}

/// Finds an `m`-by-`n` grid of cells of `d` whose top is `top` and whose
/// elements all lie in `[floor, top]`, oriented like the base grids.
pub fn locate_grid(d: &SlimDiagram, top: usize, floor: usize, m: usize, n: usize) -> Option<Vec<Vec<usize>>> {
    let l = d.lattice();
    let top_id = l.id(top);
    'candidate: for start in d.cells().iter().filter(|c| c.top == top_id) {
        let mut cells: Vec<Vec<Option<&Cell>>> = vec![vec![None; n]; m];
        for i in (0..m).rev() {
            for j in (0..n).rev() {
                let cell = if i == m - 1 && j == n - 1 {
                    Some(start)
                } else if j < n - 1 {
                    let east = cells[i][j + 1].unwrap();
                    d.cells().iter().find(|c| c.top == east.left && c.right == east.bottom)
                } else {
                    let north = cells[i + 1][j].unwrap();
                    d.cells().iter().find(|c| c.top == north.right && c.left == north.bottom)
                };
                match cell {
                    Some(c) => cells[i][j] = Some(c),
                    None => continue 'candidate,
                }
            }
        }
        let mut grid: Vec<Vec<Option<usize>>> = vec![vec![None; n + 1]; m + 1];
        for (i, row) in cells.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                let c = c.unwrap();
                for (di, dj, id) in [(0, 0, &c.bottom), (1, 0, &c.left), (0, 1, &c.right), (1, 1, &c.top)] {
                    let x = l.index_of(id).unwrap();
                    match grid[i + di][j + dj] {
                        Some(y) if y != x => continue 'candidate,
                        _ => grid[i + di][j + dj] = Some(x),
                    }
                }
            }
        }
        let grid: Vec<Vec<usize>> = grid.into_iter().map(|r| r.into_iter().map(Option::unwrap).collect()).collect();
        if grid.iter().flatten().any(|&x| !l.leq(floor, x) || !l.leq(x, top)) {
            continue;
        }
        let g = make_grid(&[m + 1, n + 1]).unwrap();
        let map = g.lattice().elements().map(|x| grid[g.coords(x)[0]][g.coords(x)[1]]).collect();
        match Homomorphism::new(g.lattice(), l, map) {
            Ok(h) if h.is_injective() => return Some(grid),
            _ => continue,
        }
    }
    None
}

/// Builds the extension `K` of a slim semimodular `l` and checks that no
/// retraction `K → L'` exists.
///
/// `R` is the slim rectangular lattice of `script` (searched for when not
/// given) and contains `l`; its base is an `m`-by-`n` grid. With
/// `t = max(m + n + 1, |L| + 1)` the lattice `S7^(t)` holds a copy `G'` of
/// that grid below the inner coatom `a_{n+1}`, and replaying the forks of
/// `R` on `G'` yields `K` together with an embedding `R → K`.
///
/// With the first grid coordinate ascending to the upper left, the `m`
/// steps of the first axis run down to the right of the top of `G'` and the
/// `n` steps of the second run down to its left, so the top needs `n` inner
/// coatoms on its left and `m` on its right.
pub fn theorem1_witness(l: &FiniteLattice, script: Option<&ForkScript>) -> Result<WitnessReport> {
    if l.len() < 2 {
        return Err(Error::TooSmall);
    }
    if !l.is_slim() || !l.is_semimodular() {
        return Err(Error::NotSlimSemimodular);
    }
    let (script, r, psi) = match script {
        Some(s) => {
            let r = build_slim_rectangular(s)?;
            let psi = find_embedding(l, r.lattice()).ok_or(Error::NoRectangularExtensionFound)?;
            (s.clone(), r, psi)
        }
        None => find_rectangular_extension(l, ExtensionBounds::default())?,
    };
    let (m, n) = script.grid_dims();
    let t = (m + n + 1).max(l.len() + 1);

    let mut k = s7_family(t);
    let s7_size = k.lattice().len();
    let coatom_ids: Vec<String> = k.inner_coatoms().iter().map(|&a| k.lattice().id(a).to_string()).collect();
    let b_id = k.lattice().id(k.lattice().meet_all(k.inner_coatoms())).to_string();
    let a_top = k.inner_coatoms()[n];
    let b = k.lattice().index_of(&b_id).unwrap();
    let g = locate_grid(&k, a_top, b, m, n).ok_or_else(|| Error::ValidationFailed("no grid below the inner coatom".into()))?;
    let g_ids: Vec<Vec<String>> = g.iter().map(|row| row.iter().map(|&x| k.lattice().id(x).to_string()).collect()).collect();

    // Replay the forks of R on G'.
    let base = make_grid(&[m + 1, n + 1])?;
    let mut phi: HashMap<String, String> = base
        .lattice()
        .elements()
        .map(|x| {
            let c = base.coords(x);
            (base.lattice().id(x).to_string(), g_ids[c[0]][c[1]].clone())
        })
        .collect();
    let mut replay = SlimDiagram::grid(m + 1, n + 1)?;
    for (top, left) in &script.steps {
        let mirrored = (phi[top].clone(), phi[left].clone());
        let out_r = replay.add_fork(top, left)?;
        let out_k = k.add_fork(&mirrored.0, &mirrored.1)?;
        if out_k.left_leg.len() < out_r.left_leg.len() || out_k.right_leg.len() < out_r.right_leg.len() {
            return Err(Error::ValidationFailed("mirrored fork has shorter legs".into()));
        }
        phi.insert(out_r.apex, out_k.apex);
        for (x, y) in out_r.left_leg.into_iter().zip(out_k.left_leg) {
            phi.insert(x, y);
        }
        for (x, y) in out_r.right_leg.into_iter().zip(out_k.right_leg) {
            phi.insert(x, y);
        }
    }
    let (rl, kl) = (replay.lattice(), k.lattice());
    let phi_map: Vec<usize> = rl.elements().map(|x| kl.index_of(&phi[rl.id(x)]).unwrap()).collect();
    let into_k = Homomorphism::new(rl, kl, phi_map)?;
    if !into_k.is_injective() {
        return Err(Error::ValidationFailed("R → K is not injective".into()));
    }
    // `replay` and `r` are the same diagram; map L through identifiers.
    let l_embedding: Vec<usize> =
        psi.iter().map(|&y| into_k.apply(rl.index_of(r.lattice().id(y)).unwrap())).collect();
    let mut l_prime = l_embedding.clone();
    l_prime.sort_unstable();

    let inner_coatoms: Vec<usize> = coatom_ids.iter().map(|s| kl.index_of(s).unwrap()).collect();
    let b = kl.index_of(&b_id).unwrap();
    let a_top = inner_coatoms[n];
    if l_prime.iter().any(|&x| !kl.leq(b, x) || !kl.leq(x, a_top)) {
        return Err(Error::ValidationFailed("L' leaves the interval [b, a_{n+1}]".into()));
    }
    let g_prime = g_ids.iter().map(|row| row.iter().map(|s| kl.index_of(s).unwrap()).collect()).collect();

    let search = exists_retraction(kl, &l_prime, SearchMode::First)?;

    let mut swing = Vec::new();
    let mut block = inner_coatoms.clone();
    block.push(kl.top());
    for i in 0..t {
        for j in i + 1..t {
            let theta = congruence_generated_by(kl, &[(inner_coatoms[i], inner_coatoms[j])])?;
            swing.push(SwingCheck { i: i + 1, j: j + 1, collapses: block.iter().all(|&x| theta.related(x, kl.top())) });
        }
    }

    Ok(WitnessReport {
        l: l.clone(),
        script,
        r,
        m,
        n,
        t,
        k,
        s7_size,
        inner_coatoms,
        b,
        g_prime,
        l_embedding,
        l_prime,
        retraction_found: search.retraction.is_some(),
        search_nodes: search.nodes,
        swing,
    })
}

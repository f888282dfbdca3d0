//! Slim semimodular lattices with a planar cell structure: grids, forks,
//! the `S7^(i)` family and slim rectangular lattices built by fork scripts.
//!
//! A diagram keeps its 4-cells as `(bottom, left, right, top)` identifier
//! quadruples. In a grid `C_{m+1} × C_{n+1}` the first coordinate ascends to
//! the upper left, so the cell at `(i, j)` is
//! `((i,j), (i+1,j), (i,j+1), (i+1,j+1))`.

mod witness;

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::make_grid;
use crate::lattice::{build_lattice, FiniteLattice};
use crate::oracle::search::find_embedding;

pub use witness::{locate_grid, theorem1_witness, SwingCheck, WitnessReport};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub bottom: String,
    pub left: String,
    pub right: String,
    pub top: String,
}

impl Cell {
    fn new(bottom: &str, left: &str, right: &str, top: &str) -> Self {
        Self { bottom: bottom.into(), left: left.into(), right: right.into(), top: top.into() }
    }
}

/// New elements created by one fork, legs listed from the top down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForkOutcome {
    pub apex: String,
    pub left_leg: Vec<String>,
    pub right_leg: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct SlimDiagram {
    lattice: FiniteLattice,
    cells: Vec<Cell>,
    forks: usize,
}

impl SlimDiagram {
    /// The grid `C_rows × C_cols` (an `(rows−1)`-by-`(cols−1)` grid) with its cells.
    pub fn grid(rows: usize, cols: usize) -> Result<Self> {
        let g = make_grid(&[rows, cols])?;
        let at = |i: usize, j: usize| g.lattice().id(g.element(&[i, j]).unwrap()).to_string();
        let mut cells = Vec::new();
        for i in 0..rows - 1 {
            for j in 0..cols - 1 {
                cells.push(Cell::new(&at(i, j), &at(i + 1, j), &at(i, j + 1), &at(i + 1, j + 1)));
            }
        }
        cells.sort();
        Ok(Self { lattice: g.into_lattice(), cells, forks: 0 })
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn find_cell(&self, top: &str, left: &str) -> Option<&Cell> {
        self.cells.iter().find(|c| c.top == top && c.left == left)
    }

    /// Cells whose top is the top of the lattice, left to right.
    pub fn top_cells(&self) -> Vec<&Cell> {
        let top = self.lattice.id(self.lattice.top());
        let row: Vec<&Cell> = self.cells.iter().filter(|c| c.top == top).collect();
        let Some(mut cur) = row.iter().copied().find(|c| !row.iter().any(|d| d.right == c.left)) else {
            return Vec::new();
        };
        let mut out = vec![cur];
        while let Some(next) = row.iter().copied().find(|d| d.left == cur.right) {
            out.push(next);
            cur = next;
        }
        out
    }

    /// Coatoms that are not on the boundary, left to right.
    pub fn inner_coatoms(&self) -> Vec<usize> {
        let row = self.top_cells();
        if row.len() < 2 {
            return Vec::new();
        }
        row[..row.len() - 1].iter().map(|c| self.lattice.index_of(&c.right).unwrap()).collect()
    }

    /// Adds a fork to the cell with the given top and left corner.
    ///
    /// A new element goes just below the top; the left leg then puts one new
    /// element on the lower-left edge of the cell and keeps descending into
    /// the cell whose upper-right edge is the edge just split, until no such
    /// cell exists. The right leg is symmetric.
    pub fn add_fork(&mut self, top: &str, left: &str) -> Result<ForkOutcome> {
        let not_cell = || Error::NotA4Cell { top: top.to_string(), left: left.to_string() };
        let k = self.cells.iter().position(|c| c.top == top && c.left == left).ok_or_else(not_cell)?;
        let mut cells = self.cells.clone();
        let cell = cells.remove(k);
        let f = self.forks + 1;
        let mut taken: HashSet<String> = self.lattice.ids().iter().cloned().collect();
        let mut fresh = |base: String| {
            let mut s = base;
            while taken.contains(&s) {
                s.push('\'');
            }
            taken.insert(s.clone());
            s
        };
        let mut covers: BTreeSet<(String, String)> = self.lattice.cover_ids().into_iter().collect();
        let split = |covers: &mut BTreeSet<(String, String)>, lo: &str, hi: &str, w: &str| -> Result<()> {
            if !covers.remove(&(lo.to_string(), hi.to_string())) {
                return Err(Error::ValidationFailed(format!("`{lo}` ≺ `{hi}` is not an edge")));
            }
            covers.insert((lo.to_string(), w.to_string()));
            covers.insert((w.to_string(), hi.to_string()));
            Ok(())
        };

        let apex = fresh(format!("s{f}"));
        covers.insert((apex.clone(), cell.top.clone()));

        let x1 = fresh(format!("x{f}.1"));
        split(&mut covers, &cell.bottom, &cell.left, &x1)?;
        covers.insert((x1.clone(), apex.clone()));
        let mut left_leg = vec![x1.clone()];
        let mut edge = (cell.bottom.clone(), cell.left.clone());
        while let Some(j) = cells.iter().position(|c| c.top == edge.1 && c.right == edge.0) {
            let c = cells.remove(j);
            let p = left_leg.last().unwrap().clone();
            let q = fresh(format!("x{f}.{}", left_leg.len() + 1));
            split(&mut covers, &c.bottom, &c.left, &q)?;
            covers.insert((q.clone(), p.clone()));
            cells.push(Cell::new(&q, &c.left, &p, &c.top));
            cells.push(Cell::new(&c.bottom, &q, &c.right, &p));
            edge = (c.bottom, c.left);
            left_leg.push(q);
        }

        let y1 = fresh(format!("y{f}.1"));
        split(&mut covers, &cell.bottom, &cell.right, &y1)?;
        covers.insert((y1.clone(), apex.clone()));
        let mut right_leg = vec![y1.clone()];
        let mut edge = (cell.bottom.clone(), cell.right.clone());
        while let Some(j) = cells.iter().position(|c| c.top == edge.1 && c.left == edge.0) {
            let c = cells.remove(j);
            let p = right_leg.last().unwrap().clone();
            let q = fresh(format!("y{f}.{}", right_leg.len() + 1));
            split(&mut covers, &c.bottom, &c.right, &q)?;
            covers.insert((q.clone(), p.clone()));
            cells.push(Cell::new(&q, &p, &c.right, &c.top));
            cells.push(Cell::new(&c.bottom, &c.left, &q, &p));
            edge = (c.bottom, c.right);
            right_leg.push(q);
        }

        cells.push(Cell::new(&x1, &cell.left, &apex, &cell.top));
        cells.push(Cell::new(&y1, &apex, &cell.right, &cell.top));
        cells.push(Cell::new(&cell.bottom, &x1, &y1, &apex));
        cells.sort();

        let mut ids: Vec<String> = self.lattice.ids().to_vec();
        ids.push(apex.clone());
        ids.extend(left_leg.iter().cloned());
        ids.extend(right_leg.iter().cloned());
        let lattice = build_lattice(ids, covers)?;
        let next = Self { lattice, cells, forks: f };
        next.validate_fork(self, 1 + left_leg.len() + right_leg.len())?;
        *self = next;
        Ok(ForkOutcome { apex, left_leg, right_leg })
    }

    fn validate_fork(&self, before: &SlimDiagram, added: usize) -> Result<()> {
        let l = &self.lattice;
        let fail = |what: &str| Err(Error::ValidationFailed(format!("fork result {what}")));
        if !l.is_slim() {
            return fail("is not slim");
        }
        if !l.is_semimodular() {
            return fail("is not semimodular");
        }
        if l.length() != before.lattice.length() + 1 {
            return fail("does not have length one more");
        }
        if l.len() != before.lattice.len() + added {
            return fail("has the wrong number of elements");
        }
        if !self.cells_match_lattice() {
            return fail("has a cell structure that disagrees with its 4-cells");
        }
        Ok(())
    }

    /// The recorded cells are exactly the covering squares of the lattice.
    pub fn cells_match_lattice(&self) -> bool {
        let l = &self.lattice;
        let norm = |b: usize, x: usize, y: usize, t: usize| (b, x.min(y), x.max(y), t);
        let recorded: BTreeSet<_> = self
            .cells
            .iter()
            .filter_map(|c| {
                let [b, x, y, t] = [&c.bottom, &c.left, &c.right, &c.top].map(|s| l.index_of(s));
                Some(norm(b?, x?, y?, t?))
            })
            .collect();
        let actual: BTreeSet<_> = l.four_cells().iter().map(|c| norm(c.bottom, c.left, c.right, c.top)).collect();
        recorded.len() == self.cells.len() && recorded == actual
    }
}

/// Functional form of [`SlimDiagram::add_fork`].
pub fn add_fork(d: &SlimDiagram, top: &str, left: &str) -> Result<SlimDiagram> {
    let mut next = d.clone();
    next.add_fork(top, left)?;
    Ok(next)
}

/// `S7^(1)` is `B2` with a fork in its only cell; `S7^(i+1)` adds a fork to
/// the rightmost cell of `S7^(i)` containing the top.
pub fn s7_family(i: usize) -> SlimDiagram {
    assert!(i >= 1, "the family starts at 1");
    let mut d = SlimDiagram::grid(2, 2).expect("B2 is a grid");
    for _ in 0..i {
        let c = d.top_cells().last().map(|c| (*c).clone()).expect("a cell below the top");
        d.add_fork(&c.top, &c.left).expect("forks extend S7^(i)");
    }
    d
}

/// A grid and a sequence of forks, each naming a cell by its top and left corner.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ForkScript {
    pub base_grid_sizes: (usize, usize),
    pub steps: Vec<(String, String)>,
}

impl ForkScript {
    /// `(m, n)`: the base is an `m`-by-`n` grid.
    pub fn grid_dims(&self) -> (usize, usize) {
        (self.base_grid_sizes.0 - 1, self.base_grid_sizes.1 - 1)
    }
}

/// Replays a fork script, validating every prefix.
pub fn build_slim_rectangular(script: &ForkScript) -> Result<SlimDiagram> {
    let (rows, cols) = script.base_grid_sizes;
    let mut d = SlimDiagram::grid(rows, cols)?;
    for (top, left) in &script.steps {
        d.add_fork(top, left)?;
    }
    Ok(d)
}

/// Search limits for [`find_rectangular_extension`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtensionBounds {
    pub max_forks: usize,
}

impl Default for ExtensionBounds {
    fn default() -> Self {
        Self { max_forks: 3 }
    }
}

/// A slim rectangular lattice containing `l` as a sublattice, found by
/// trying fork scripts in order of `m + n + forks`, with `m + n` at most
/// `max(2, length l)`. Returns the script, its diagram and an embedding.
pub fn find_rectangular_extension(l: &FiniteLattice, bounds: ExtensionBounds) -> Result<(ForkScript, SlimDiagram, Vec<usize>)> {
    let cap = l.length().max(2);
    for total in 2..=cap + bounds.max_forks {
        for forks in 0..=bounds.max_forks.min(total - 2) {
            let mn = total - forks;
            if mn > cap {
                continue;
            }
            for m in 1..mn {
                let n = mn - m;
                let base = SlimDiagram::grid(m + 1, n + 1)?;
                let mut steps = Vec::new();
                if let Some(found) = fork_search(l, &base, forks, &mut steps) {
                    let script = ForkScript { base_grid_sizes: (m + 1, n + 1), steps };
                    return Ok((script, found.0, found.1));
                }
            }
        }
    }
    Err(Error::NoRectangularExtensionFound)
}

fn fork_search(
    l: &FiniteLattice,
    d: &SlimDiagram,
    forks: usize,
    steps: &mut Vec<(String, String)>,
) -> Option<(SlimDiagram, Vec<usize>)> {
    if forks == 0 {
        if d.lattice.len() < l.len() {
            return None;
        }
        return find_embedding(l, &d.lattice).map(|e| (d.clone(), e));
    }
    for c in &d.cells {
        let Ok(next) = add_fork(d, &c.top, &c.left) else {
            continue;
        };
        steps.push((c.top.clone(), c.left.clone()));
        if let Some(found) = fork_search(l, &next, forks - 1, steps) {
            return Some(found);
        }
        steps.pop();
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::canonical_s7;
    use crate::oracle::search::are_isomorphic;

    #[test]
    fn grid_cells() {
        for m in 1..=4 {
            for n in 1..=4 {
                let d = SlimDiagram::grid(m + 1, n + 1).unwrap();
                assert_eq!(d.cells().len(), m * n);
                assert!(d.cells_match_lattice());
            }
        }
    }

    #[test]
    fn fork_on_square_is_s7() {
        let d = s7_family(1);
        assert_eq!(d.lattice().len(), 7);
        assert!(are_isomorphic(d.lattice(), &canonical_s7()));
        assert_eq!(d.inner_coatoms().len(), 1);
        assert_eq!(d.cells().len(), 3);
    }

    #[test]
    fn family_sizes() {
        for i in 1..=6 {
            let d = s7_family(i);
            assert_eq!(d.lattice().len(), 4 + i * (i + 1) / 2 + 2 * i, "i = {i}");
            assert_eq!(d.inner_coatoms().len(), i);
            assert_eq!(d.lattice().length(), i + 2);
        }
    }

    #[test]
    fn second_member_legs() {
        let mut d = s7_family(1);
        let c = d.top_cells().last().map(|c| (*c).clone()).unwrap();
        let out = d.add_fork(&c.top, &c.left).unwrap();
        assert_eq!((out.left_leg.len(), out.right_leg.len()), (2, 1));
        assert_eq!(d.lattice().len(), 11);
    }

    #[test]
    fn upper_cell_of_three_by_two() {
        let script = ForkScript { base_grid_sizes: (3, 2), steps: vec![("(2,1)".into(), "(2,0)".into())] };
        let d = build_slim_rectangular(&script).unwrap();
        assert_eq!(d.lattice().len(), 10);
        let plain = build_slim_rectangular(&ForkScript { base_grid_sizes: (3, 2), steps: vec![] }).unwrap();
        assert_eq!(plain.lattice().len(), 6);
    }

    #[test]
    fn bad_cell() {
        let d = SlimDiagram::grid(2, 2).unwrap();
        assert!(matches!(add_fork(&d, "(0,0)", "(1,0)"), Err(Error::NotA4Cell { .. })));
    }

    #[test]
    fn extension_of_s7() {
        let (script, r, e) = find_rectangular_extension(&canonical_s7(), ExtensionBounds::default()).unwrap();
        assert_eq!(script.base_grid_sizes, (2, 2));
        assert_eq!(script.steps.len(), 1);
        assert_eq!(e.len(), 7);
        assert!(r.lattice().check_sublattice(&e));
    }
}

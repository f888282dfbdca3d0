//! Retractions onto chains, grids and boolean sublattices, and the
//! absolute-retract classifier for distributive lattices of bounded
//! order dimension.

mod classify;
pub mod morphism;

use std::fmt;
use std::str::FromStr;

use crate::chains::{grid_embed, order_dimension};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::lattice::FiniteLattice;

pub use classify::{classify_absolute_retract, Certificate, Refutation, Verdict, WitnessCase, DEFAULT_SEARCH_BOUND};
pub use morphism::{check_cover01, Congruence, Cover01Report, Homomorphism};

/// Order-dimension bound of a class; `Omega` is unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dim {
    Finite(usize),
    Omega,
}

impl Dim {
    pub fn admits(self, k: usize) -> bool {
        match self {
            Dim::Finite(n) => k <= n,
            Dim::Omega => true,
        }
    }
}

/// A class of lattices with its morphisms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassId {
    /// Finite distributive lattices of dimension at most `n`, all homomorphisms.
    Dfin(Dim),
    /// The same lattices with cover-preserving {0,1}-homomorphisms.
    Dcov(Dim),
    /// Finite members of the class of all distributive lattices.
    DallFinite,
    SlimSemimodular,
}

impl ClassId {
    pub fn dim(self) -> Option<Dim> {
        match self {
            ClassId::Dfin(d) | ClassId::Dcov(d) => Some(d),
            ClassId::DallFinite => Some(Dim::Omega),
            ClassId::SlimSemimodular => None,
        }
    }

    pub fn contains(self, l: &FiniteLattice) -> bool {
        match self.dim() {
            Some(d) => l.is_distributive() && (l.len() == 1 || d.admits(order_dimension(l).unwrap_or(0))),
            None => l.is_slim() && l.is_semimodular(),
        }
    }
}

impl FromStr for ClassId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::NotInClass(format!("unknown class `{s}`"));
        let dim = |n: &str| -> Result<Dim> {
            match n {
                "omega" | "ω" => Ok(Dim::Omega),
                n => match n.parse::<usize>() {
                    Ok(k) if k >= 1 => Ok(Dim::Finite(k)),
                    _ => Err(bad()),
                },
            }
        };
        match s.split_once(':') {
            Some(("dfin", n)) => Ok(ClassId::Dfin(dim(n)?)),
            Some(("dcov", n)) => Ok(ClassId::Dcov(dim(n)?)),
            None if s == "dall" => Ok(ClassId::DallFinite),
            None if s == "sps" => Ok(ClassId::SlimSemimodular),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dim = |d: &Dim| match d {
            Dim::Finite(n) => n.to_string(),
            Dim::Omega => "omega".into(),
        };
        match self {
            ClassId::Dfin(d) => write!(f, "dfin:{}", dim(d)),
            ClassId::Dcov(d) => write!(f, "dcov:{}", dim(d)),
            ClassId::DallFinite => f.write_str("dall"),
            ClassId::SlimSemimodular => f.write_str("sps"),
        }
    }
}

/// Index of the block of `p` when a chain of positions is cut at the sorted
/// positions `e`: the least `e_i ≥ p`, or the last one.
fn chain_block(e: &[usize], p: usize) -> usize {
    e.iter().position(|&x| x >= p).unwrap_or(e.len() - 1)
}

/// Retraction of a chain onto a nonempty subset: every element goes to the
/// least chosen element above it, and elements above all of them go to the
/// largest.
pub fn chain_retraction(c: &FiniteLattice, e: &[usize]) -> Result<Homomorphism> {
    if !c.is_chain() {
        return Err(Error::NotAChain);
    }
    if e.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mut levels: Vec<usize> = e.iter().map(|&x| c.height(x)).collect();
    levels.sort_unstable();
    levels.dedup();
    let by_height: Vec<usize> = {
        let mut v: Vec<usize> = c.elements().collect();
        v.sort_by_key(|&x| c.height(x));
        v
    };
    let map = c.elements().map(|x| by_height[levels[chain_block(&levels, c.height(x))]]).collect();
    let f = Homomorphism::new(c, c, map)?;
    debug_assert!(f.is_retraction_onto(e));
    Ok(f)
}

/// Turns a labelling of `k` into a retraction onto `d`, after checking that
/// the labels form a congruence with exactly `|d|` blocks, one per element of `d`.
fn retraction_from_labels<K: Eq + std::hash::Hash + Clone>(k: &FiniteLattice, labels: &[K], d: &[usize]) -> Result<Homomorphism> {
    let theta = Congruence::from_labels(k, labels)?;
    if theta.num_blocks() != d.len() || !theta.is_diagonal_on(d) {
        return Err(Error::ValidationFailed(format!(
            "congruence has {} blocks for a sublattice of {} elements",
            theta.num_blocks(),
            d.len()
        )));
    }
    let mut rep = vec![usize::MAX; theta.num_blocks()];
    d.iter().for_each(|&x| rep[theta.block_of(x)] = x);
    let map = k.elements().map(|x| rep[theta.block_of(x)]).collect();
    let f = Homomorphism::new(k, k, map)?;
    if !f.is_retraction_onto(d) {
        return Err(Error::ValidationFailed("induced map does not fix the sublattice".into()));
    }
    Ok(f)
}

/// Retraction of a grid onto a full-dimensional subgrid, through the
/// intersection of the kernels of the chain retractions on each axis.
pub fn grid_retraction(k: &Grid, d: &[usize]) -> Result<Homomorphism> {
    let chains = k.recover_subgrid_chains(d)?;
    let positions: Vec<Vec<usize>> =
        chains.iter().enumerate().map(|(i, c)| c.iter().map(|&x| k.coords(x)[i]).collect()).collect();
    let labels: Vec<Vec<usize>> = k
        .lattice()
        .elements()
        .map(|x| k.coords(x).iter().zip(&positions).map(|(&p, e)| chain_block(e, p)).collect())
        .collect();
    retraction_from_labels(k.lattice(), &labels, d)
}

/// The maximal chain of a boolean sublattice `d` built by adding its atoms
/// in index order, bottom first.
fn boolean_chain(k: &FiniteLattice, d: &[usize]) -> Vec<usize> {
    let bottom = k.meet_all(d.iter().copied());
    let mut atoms: Vec<usize> = d
        .iter()
        .copied()
        .filter(|&a| a != bottom && !d.iter().any(|&y| y != bottom && y != a && k.lt(y, a)))
        .collect();
    atoms.sort_unstable();
    let mut chain = vec![bottom];
    for a in atoms {
        chain.push(k.join(*chain.last().unwrap(), a));
    }
    chain
}

/// Retraction of a finite distributive lattice onto a boolean sublattice,
/// through the intersection of the two-block congruences of prime ideals
/// `{x : p_i ≰ x}`.
pub fn boolean_retraction(k: &FiniteLattice, d: &[usize]) -> Result<Homomorphism> {
    if !k.is_distributive() {
        return Err(Error::NotDistributive);
    }
    if !k.check_sublattice(d) || !k.induced(d)?.0.is_boolean() {
        return Err(Error::NotBooleanSublattice);
    }
    let chain = boolean_chain(k, d);
    let ji = k.join_irreducibles();
    let primes: Vec<usize> = chain
        .windows(2)
        .map(|w| {
            *ji.iter()
                .find(|&&p| k.leq(p, w[1]) && !k.leq(p, w[0]))
                .expect("a join-irreducible separates each cover")
        })
        .collect();
    let labels: Vec<Vec<bool>> = k.elements().map(|x| primes.iter().map(|&p| k.leq(p, x)).collect()).collect();
    retraction_from_labels(k, &labels, d)
}

/// Retraction of a member `l` of `class` onto a boolean sublattice or a grid
/// sublattice of the same dimension: embed `l` in a grid, retract the grid,
/// restrict.
pub fn retract_onto(l: &FiniteLattice, d: &[usize], class: ClassId) -> Result<Homomorphism> {
    if class.dim().is_none() || !class.contains(l) {
        return Err(Error::NotInClass(class.to_string()));
    }
    if !l.check_sublattice(d) {
        return Err(Error::NotASublattice);
    }
    let mut d = d.to_vec();
    d.sort_unstable();
    d.dedup();
    if d.len() == l.len() {
        return Ok(Homomorphism::identity(l));
    }
    let sub = l.induced(&d)?.0;
    let full_grid = order_dimension(&sub)
        .is_ok_and(|k| k == order_dimension(l).unwrap_or(0) && grid_embed(&sub).is_ok_and(|e| e.is_bijective()));
    if !full_grid && !sub.is_boolean() {
        return Err(Error::NotEligible);
    }
    let e = grid_embed(l)?;
    let image: Vec<usize> = d.iter().map(|&x| e.map[x]).collect();
    let f = if full_grid { grid_retraction(&e.target, &image)? } else { boolean_retraction(e.target.lattice(), &image)? };
    let mut back = vec![usize::MAX; e.target.lattice().len()];
    l.elements().for_each(|x| back[e.map[x]] = x);
    let map = l.elements().map(|x| back[f.apply(e.map[x])]).collect();
    let g = Homomorphism::new(l, l, map)?;
    if !g.is_retraction_onto(&d) {
        return Err(Error::ValidationFailed("restricted map does not fix the sublattice".into()));
    }
    Ok(g)
}

use serde::Serialize;

use crate::chains::{grid_embed, order_dimension};
use crate::error::{Error, Result};
use crate::grid::{dimension_bump, verify_equal_length_embedding};
use crate::lattice::FiniteLattice;
use crate::oracle::search::{exists_retraction, SearchMode};
use crate::retract::{ClassId, Dim};

/// Witnesses up to this many elements are also checked by exhaustive search.
pub const DEFAULT_SEARCH_BOUND: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum WitnessCase {
    /// `dim D < n` and the grid hull of `D` is boolean.
    BooleanHull,
    /// `dim D < n` and the grid hull is split into one more dimension.
    DimensionBump,
    /// `dim D = n`: the grid hull itself.
    GridHull,
}

/// Why no retraction `K → D` exists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Certificate {
    pub proper: bool,
    pub cover01: bool,
    pub equal_length: bool,
    pub witness_in_class: bool,
    /// `Some(false)` when exhaustive search found no retraction; `None` when
    /// the witness was above the search bound.
    pub retraction_found: Option<bool>,
    pub search_nodes: u64,
}

impl Certificate {
    pub fn holds(&self) -> bool {
        self.proper && self.cover01 && self.equal_length && self.witness_in_class && self.retraction_found != Some(true)
    }
}

#[derive(Clone, Debug)]
pub struct Refutation {
    pub case: WitnessCase,
    pub witness: FiniteLattice,
    /// `embedding[x]` is the image of `x ∈ D` in the witness.
    pub embedding: Vec<usize>,
    pub certificate: Certificate,
}

#[derive(Clone, Debug)]
pub enum Verdict {
    IsAbsoluteRetract { boolean: bool, grid: bool },
    Not(Box<Refutation>),
}

impl Verdict {
    pub fn is_absolute_retract(&self) -> bool {
        matches!(self, Verdict::IsAbsoluteRetract { .. })
    }
}

/// Decides whether `d` is an absolute retract for `class`: it is exactly when
/// `d` is boolean or, for a finite bound `n`, an `n`-dimensional grid.
/// Otherwise a proper equal-length cover-preserving {0,1}-extension in the
/// class is returned; any retraction onto `d` from it would be an isomorphism.
pub fn classify_absolute_retract(d: &FiniteLattice, class: ClassId, search_bound: usize) -> Result<Verdict> {
    let Some(bound) = class.dim() else {
        return Err(Error::NotEligible);
    };
    if !class.contains(d) {
        return Err(Error::NotInClass(class.to_string()));
    }
    if d.is_boolean() {
        return Ok(Verdict::IsAbsoluteRetract { boolean: true, grid: d.len() > 1 });
    }
    let hull = grid_embed(d)?;
    let k = order_dimension(d)?;
    let is_grid = hull.is_bijective();
    let n = match bound {
        Dim::Finite(n) => n,
        Dim::Omega => k + 1,
    };
    if is_grid && k == n {
        return Ok(Verdict::IsAbsoluteRetract { boolean: false, grid: true });
    }

    let (case, witness, embedding) = if k < n {
        if hull.target.is_boolean() {
            (WitnessCase::BooleanHull, hull.target.lattice().clone(), hull.map.clone())
        } else {
            let (bumped, bump) = dimension_bump(&hull.target)?;
            let map = hull.map.iter().map(|&y| bump[y]).collect();
            (WitnessCase::DimensionBump, bumped.into_lattice(), map)
        }
    } else {
        (WitnessCase::GridHull, hull.target.lattice().clone(), hull.map.clone())
    };

    let mut certificate = Certificate {
        proper: witness.len() > d.len(),
        cover01: verify_equal_length_embedding(d, &witness, &embedding).is_ok(),
        equal_length: witness.length() == d.length(),
        witness_in_class: class.contains(&witness),
        retraction_found: None,
        search_nodes: 0,
    };
    if witness.len() <= search_bound {
        let search = exists_retraction(&witness, &embedding, SearchMode::First)?;
        certificate.retraction_found = Some(search.retraction.is_some());
        certificate.search_nodes = search.nodes;
    }
    Ok(Verdict::Not(Box::new(Refutation { case, witness, embedding, certificate })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use crate::lattice::build_lattice;
    use crate::oracle::search::are_isomorphic;

    fn refute(d: &FiniteLattice, class: &str) -> Refutation {
        match classify_absolute_retract(d, class.parse().unwrap(), DEFAULT_SEARCH_BOUND).unwrap() {
            Verdict::Not(r) => *r,
            v => panic!("expected a refutation, got {v:?}"),
        }
    }

    #[test]
    fn positive_cases() {
        let b3 = make_grid(&[2, 2, 2]).unwrap().into_lattice();
        assert!(classify_absolute_retract(&b3, "dfin:omega".parse().unwrap(), 64).unwrap().is_absolute_retract());
        let c3 = FiniteLattice::chain(3);
        assert!(classify_absolute_retract(&c3, "dfin:1".parse().unwrap(), 64).unwrap().is_absolute_retract());
    }

    #[test]
    fn chain_in_plane() {
        let c3 = FiniteLattice::chain(3);
        let r = refute(&c3, "dfin:2");
        assert_eq!(r.case, WitnessCase::DimensionBump);
        assert!(are_isomorphic(&r.witness, &make_grid(&[2, 2]).unwrap().into_lattice()));
        assert!(r.certificate.holds());
        assert_eq!(r.certificate.retraction_found, Some(false));
    }

    #[test]
    fn d5_in_plane() {
        let d5 = build_lattice(["0", "p", "q", "1", "t"], [("0", "p"), ("0", "q"), ("p", "1"), ("q", "1"), ("1", "t")]).unwrap();
        let r = refute(&d5, "dfin:2");
        assert_eq!(r.case, WitnessCase::GridHull);
        assert!(are_isomorphic(&r.witness, &make_grid(&[3, 2]).unwrap().into_lattice()));
        assert!(r.certificate.holds());
    }

    #[test]
    fn grid_below_omega_is_refuted() {
        let g = make_grid(&[3, 2]).unwrap().into_lattice();
        let r = refute(&g, "dfin:omega");
        assert_eq!(r.case, WitnessCase::DimensionBump);
        assert_eq!(r.witness.len(), 8);
        assert!(r.certificate.holds());
    }

    #[test]
    fn outside_class() {
        let b3 = make_grid(&[2, 2, 2]).unwrap().into_lattice();
        assert!(matches!(classify_absolute_retract(&b3, "dfin:2".parse().unwrap(), 64), Err(Error::NotInClass(_))));
    }
}

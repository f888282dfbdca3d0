use crate::error::{Error, Result};
use crate::lattice::FiniteLattice;
use crate::retract::Congruence;

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
        true
    }
}

/// The least congruence of `l` collapsing every pair in `pairs`.
///
/// Each element is related to its class representative; closing those pairs
/// under all join and meet translations until nothing merges gives a
/// compatible equivalence.
pub fn congruence_generated_by(l: &FiniteLattice, pairs: &[(usize, usize)]) -> Result<Congruence> {
    let mut uf = UnionFind(l.elements().collect());
    for &(a, b) in pairs {
        uf.union(a, b);
    }
    loop {
        let mut changed = false;
        for x in l.elements() {
            let r = uf.find(x);
            if r == x {
                continue;
            }
            for z in l.elements() {
                changed |= uf.union(l.join(x, z), l.join(r, z));
                changed |= uf.union(l.meet(x, z), l.meet(r, z));
            }
        }
        if !changed {
            break;
        }
    }
    let labels: Vec<usize> = l.elements().map(|x| uf.find(x)).collect();
    let c = Congruence::from_labels(l, &labels)?;
    if !c.blocks_are_convex_sublattices() {
        return Err(Error::ValidationFailed("congruence blocks are not convex sublattices".into()));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use crate::lattice::canonical_s7;

    #[test]
    fn empty_is_diagonal() {
        let l = canonical_s7();
        assert!(congruence_generated_by(&l, &[]).unwrap().is_diagonal());
    }

    #[test]
    fn chain_bottom_pair() {
        let c3 = FiniteLattice::chain(3);
        let c = congruence_generated_by(&c3, &[(0, 1)]).unwrap();
        assert_eq!(c.blocks(), &[vec![0, 1], vec![2]]);
    }

    #[test]
    fn square_atom_pair_collapses_everything() {
        let b2 = make_grid(&[2, 2]).unwrap().into_lattice();
        let atoms = b2.atoms();
        let c = congruence_generated_by(&b2, &[(atoms[0], atoms[1])]).unwrap();
        assert_eq!(c.num_blocks(), 1);
    }

    #[test]
    fn square_edge_gives_projection_kernel() {
        let b2 = make_grid(&[2, 2]).unwrap().into_lattice();
        let [a, b] = [b2.index_of("(0,0)").unwrap(), b2.index_of("(1,0)").unwrap()];
        let c = congruence_generated_by(&b2, &[(a, b)]).unwrap();
        assert_eq!(c.num_blocks(), 2);
        assert!(c.related(b2.index_of("(0,1)").unwrap(), b2.index_of("(1,1)").unwrap()));
    }

    #[test]
    fn s7_inner_coatom_perspectivity() {
        // Joining with v perspects the collapsed edge 0-u onto v-m.
        let l = canonical_s7();
        let [z, u, v] = [l.index_of("0").unwrap(), l.index_of("u").unwrap(), l.index_of("v").unwrap()];
        let c = congruence_generated_by(&l, &[(z, u)]).unwrap();
        assert!(c.related(v, l.index_of("m").unwrap()));
    }
}

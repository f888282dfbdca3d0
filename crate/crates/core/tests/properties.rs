use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::sample::subsequence;

use latret::chains::{grid_embed, order_dimension};
use latret::grid::make_grid;
use latret::oracle::enumerate::canonical_code;
use latret::oracle::{build_equation_system, congruence_generated_by, enumerate_small_lattices, LatticeFilter};
use latret::retract::{boolean_retraction, chain_retraction, grid_retraction, Homomorphism};
use latret::slim::{build_slim_rectangular, ForkScript, SlimDiagram};
use latret::FiniteLattice;

fn small_lattices() -> &'static [FiniteLattice] {
    static CACHE: OnceLock<Vec<FiniteLattice>> = OnceLock::new();
    CACHE.get_or_init(|| enumerate_small_lattices(7, LatticeFilter::any()).unwrap())
}

fn small_distributive() -> &'static [FiniteLattice] {
    static CACHE: OnceLock<Vec<FiniteLattice>> = OnceLock::new();
    CACHE.get_or_init(|| enumerate_small_lattices(10, LatticeFilter::distributive()).unwrap())
}

fn lattice() -> impl Strategy<Value = FiniteLattice> {
    (0..small_lattices().len()).prop_map(|i| small_lattices()[i].clone())
}

fn distributive() -> impl Strategy<Value = FiniteLattice> {
    (0..small_distributive().len()).prop_map(|i| small_distributive()[i].clone())
}

fn sizes() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(2usize..=4, 1..=3)
}

/// Grid sizes and, per axis, the positions kept by a full-dimensional subgrid.
fn subgrid() -> impl Strategy<Value = (Vec<usize>, Vec<Vec<usize>>)> {
    sizes().prop_flat_map(|sizes| {
        let axes: Vec<_> = sizes.iter().map(|&s| subsequence((0..s).collect::<Vec<_>>(), 2..=s)).collect();
        (Just(sizes), axes)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn generated_congruences_are_compatible(l in lattice(), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let (a, b) = (a.index(l.len()), b.index(l.len()));
        let theta = congruence_generated_by(&l, &[(a, b)]).unwrap();
        prop_assert!(theta.related(a, b));
        prop_assert!(theta.is_compatible());
        prop_assert!(theta.blocks_are_convex_sublattices());
        prop_assert_eq!(theta.is_diagonal(), a == b);
    }

    #[test]
    fn identity_solves_every_equation_system(l in lattice(), pick in any::<prop::sample::Index>()) {
        let (x, y) = (l.bottom(), pick.index(l.len()));
        let sub = if y == l.bottom() || y == l.top() { vec![l.bottom(), l.top()] } else { vec![x, y] };
        if sub.len() < l.len() {
            let sys = build_equation_system(&l, &sub).unwrap();
            let identity: Vec<usize> = l.elements().collect();
            prop_assert!(sys.is_satisfied_by(&identity));
        }
    }

    #[test]
    fn chain_retractions(n in 1usize..10, raw in prop::collection::vec(any::<prop::sample::Index>(), 1..5)) {
        let c = FiniteLattice::chain(n);
        let mut e: Vec<usize> = raw.iter().map(|i| i.index(n)).collect();
        e.sort_unstable();
        e.dedup();
        let f = chain_retraction(&c, &e).unwrap();
        prop_assert!(f.is_retraction_onto(&e));
        prop_assert!(f.is_idempotent());
        prop_assert_eq!(f.kernel().num_blocks(), e.len());
    }

    #[test]
    fn grid_retraction_onto_subgrids((sizes, axes) in subgrid()) {
        let g = make_grid(&sizes).unwrap();
        let mut d = Vec::new();
        let mut idx = vec![0; axes.len()];
        loop {
            let coords: Vec<usize> = idx.iter().zip(&axes).map(|(&k, a)| a[k]).collect();
            d.push(g.element(&coords).unwrap());
            let Some(i) = (0..idx.len()).find(|&i| idx[i] + 1 < axes[i].len()) else { break };
            idx[i] += 1;
            idx[..i].iter_mut().for_each(|k| *k = 0);
        }
        d.sort_unstable();
        let f = grid_retraction(&g, &d).unwrap();
        prop_assert!(f.is_retraction_onto(&d));
        let grid_cells: usize = axes.iter().map(|a| a.len()).product();
        prop_assert_eq!(f.kernel().num_blocks(), grid_cells);
    }

    #[test]
    fn boolean_retractions(l in distributive(), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let (x, y) = (a.index(l.len()), b.index(l.len()));
        prop_assume!(x != y);
        let mut d = if l.comparable(x, y) { vec![x, y] } else { vec![l.meet(x, y), x, y, l.join(x, y)] };
        d.sort_unstable();
        let f = boolean_retraction(&l, &d).unwrap();
        prop_assert!(f.is_retraction_onto(&d));
        prop_assert_eq!(f.kernel().num_blocks(), d.len());
    }

    #[test]
    fn homomorphisms_compose(l in distributive()) {
        prop_assume!(l.len() > 1);
        let e = grid_embed(&l).unwrap();
        let into = Homomorphism::new(&l, e.target.lattice(), e.map.clone()).unwrap();
        prop_assert!(into.is_injective());
        prop_assert!(into.preserves_bounds());
        prop_assert_eq!(e.target.dimension(), order_dimension(&l).unwrap());
        let back = Homomorphism::identity(e.target.lattice());
        let composed = back.after(&into).unwrap();
        prop_assert_eq!(composed.map(), into.map());
    }

    #[test]
    fn distributive_length_counts_join_irreducibles(l in distributive()) {
        prop_assert_eq!(l.length(), l.join_irreducibles().len());
    }

    #[test]
    fn canonical_code_ignores_labels(l in lattice(), shift in 1usize..50) {
        let renamed = l.relabel(|s| format!("z{}{}", shift, s.chars().rev().collect::<String>())).unwrap();
        prop_assert_eq!(canonical_code(&l), canonical_code(&renamed));
    }

    #[test]
    fn fork_scripts_replay(rows in 2usize..=4, cols in 2usize..=4, choices in prop::collection::vec(any::<prop::sample::Index>(), 1..5)) {
        let mut d = SlimDiagram::grid(rows, cols).unwrap();
        let mut script = ForkScript { base_grid_sizes: (rows, cols), steps: Vec::new() };
        for choice in choices {
            let cell = d.cells()[choice.index(d.cells().len())].clone();
            let before = d.lattice().length();
            d.add_fork(&cell.top, &cell.left).unwrap();
            script.steps.push((cell.top, cell.left));
            prop_assert!(d.lattice().is_slim() && d.lattice().is_semimodular());
            prop_assert_eq!(d.lattice().length(), before + 1);
            prop_assert!(d.cells_match_lattice());
        }
        let replayed = build_slim_rectangular(&script).unwrap();
        prop_assert_eq!(replayed.lattice(), d.lattice());
    }

    #[test]
    fn grid_has_product_of_cells(sizes in sizes()) {
        let g = make_grid(&sizes).unwrap();
        prop_assert_eq!(g.lattice().len(), sizes.iter().product::<usize>());
        prop_assert_eq!(order_dimension(g.lattice()).unwrap(), sizes.len());
        if sizes.len() == 2 {
            prop_assert_eq!(g.lattice().four_cells().len(), (sizes[0] - 1) * (sizes[1] - 1));
        }
    }

    #[test]
    fn subsets_of_sublattices(l in lattice(), keep in subsequence((0..7usize).collect::<Vec<_>>(), 0..7)) {
        let subset: Vec<usize> = keep.into_iter().filter(|&x| x < l.len()).collect();
        if !subset.is_empty() && l.check_sublattice(&subset) {
            let (sub, map) = l.induced(&subset).unwrap();
            prop_assert!(Homomorphism::new(&sub, &l, map).unwrap().is_injective());
        }
    }
}

#[test]
fn enumeration_is_deterministic() {
    let a = enumerate_small_lattices(6, LatticeFilter::any()).unwrap();
    let b = enumerate_small_lattices(6, LatticeFilter::any()).unwrap();
    assert_eq!(a, b);
}

//! Exhaustive verification suites over small lattices.
//!
//! Each suite checks one family of facts against brute force and reports
//! how many instances it examined and which ones failed.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chains::order_dimension;
use crate::error::{Error, Result};
use crate::grid::{make_grid, Grid};
use crate::lattice::FiniteLattice;
use crate::oracle::congruence::congruence_generated_by;
use crate::oracle::enumerate::{enumerate_small_lattices, LatticeFilter};
use crate::oracle::equations::build_equation_system;
use crate::oracle::search::{
    all_sublattices, are_isomorphic, exists_retraction, for_each_homomorphism, sublattice_copies, SearchMode,
};
use crate::retract::{check_cover01, classify_absolute_retract, retract_onto, ClassId, Dim, Homomorphism, Verdict, DEFAULT_SEARCH_BOUND};
use crate::slim::{s7_family, theorem1_witness, ForkScript, SlimDiagram};

pub const SUITES: [&str; 9] =
    ["equations", "main-positive", "main-negative", "theorem1", "forks", "grid-facts", "subgrids", "swing", "cover01"];

const CLASSES: [Dim; 4] = [Dim::Finite(1), Dim::Finite(2), Dim::Finite(3), Dim::Omega];
const MAX_REPORTED: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub fork_scripts: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { seed: 0x5eed, fork_scripts: 120 }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteOutcome {
    pub name: String,
    pub checked: u64,
    pub failure_count: u64,
    /// The first few failures.
    pub failures: Vec<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SuiteOutcome {
    fn new(name: &str) -> Self {
        Self { name: name.into(), checked: 0, failure_count: 0, failures: Vec::new(), elapsed: Duration::ZERO }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0 && self.checked > 0
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.fail(what());
        }
    }

    fn fail(&mut self, what: String) {
        self.failure_count += 1;
        if self.failures.len() < MAX_REPORTED {
            self.failures.push(what);
        }
    }
}

fn describe(l: &FiniteLattice) -> String {
    let covers: Vec<String> = l.cover_ids().iter().map(|(a, b)| format!("{a}<{b}")).collect();
    format!("[{}]", covers.join(" "))
}

pub fn run_suite(name: &str, opts: &VerifyOptions) -> Result<SuiteOutcome> {
    let start = Instant::now();
    let mut out = match name {
        "equations" => equations()?,
        "main-positive" => main_positive()?,
        "main-negative" => main_negative()?,
        "theorem1" => theorem1()?,
        "forks" => forks(opts)?,
        "grid-facts" => grid_facts()?,
        "subgrids" => subgrids()?,
        "swing" => swing()?,
        "cover01" => cover01()?,
        other => return Err(Error::ValidationFailed(format!("unknown suite `{other}`"))),
    };
    out.elapsed = start.elapsed();
    Ok(out)
}

/// Solvability of the equation system of `(B, A)` in `A` matches the
/// existence of a retraction `B → A`; solutions and retractions correspond
/// one to one.
pub fn equations() -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("equations");
    for b in enumerate_small_lattices(6, LatticeFilter::any())? {
        let identity: Vec<usize> = b.elements().collect();
        for a in all_sublattices(&b) {
            if a.len() == b.len() {
                continue;
            }
            let sys = build_equation_system(&b, &a)?;
            let search = exists_retraction(&b, &a, SearchMode::Count)?;
            let solution = sys.solve();
            let induced_ok = solution
                .as_ref()
                .is_none_or(|s| sys.induced_map(s).is_ok_and(|f| f.is_retraction_onto(&a)));
            let pairs = b.elements().flat_map(|x| b.elements().map(move |y| (x, y)));
            let expected_len = 2 * pairs.filter(|&(x, y)| !a.contains(&x) || !a.contains(&y)).count();
            out.check(
                solution.is_some() == (search.count > 0)
                    && sys.count_solutions() == search.count
                    && induced_ok
                    && sys.is_satisfied_by(&identity)
                    && sys.equations().len() == expected_len,
                || format!("B = {} A = {:?}", describe(&b), a),
            );
        }
    }
    Ok(out)
}

/// Boolean or full-dimensional grid `D` retracts from every extension in the class.
pub fn main_positive() -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("main-positive");
    let ds = enumerate_small_lattices(8, LatticeFilter::distributive())?;
    let ks = enumerate_small_lattices(10, LatticeFilter::distributive())?;
    let dims: Vec<usize> = ks.iter().map(|k| order_dimension(k).unwrap_or(0)).collect();
    for d in &ds {
        let boolean = d.is_boolean();
        let d_dim = order_dimension(d).unwrap_or(0);
        let grid = d.len() > 1 && crate::chains::grid_embed(d).is_ok_and(|e| e.is_bijective());
        for &class_dim in &CLASSES {
            let class = ClassId::Dfin(class_dim);
            let positive = class.contains(d) && (boolean || (grid && class_dim == Dim::Finite(d_dim)));
            if !positive {
                continue;
            }
            for (k, &k_dim) in ks.iter().zip(&dims) {
                if k.len() < d.len() || !class_dim.admits(k_dim) {
                    continue;
                }
                for copy in sublattice_copies(d, k) {
                    let ok = retract_onto(k, &copy, class).is_ok_and(|f| f.is_retraction_onto(&copy) && f.is_idempotent());
                    out.check(ok, || format!("D = {} K = {} copy {:?} class {class}", describe(d), describe(k), copy));
                }
            }
        }
    }
    Ok(out)
}

/// Every other `D` gets a proper equal-length cover-preserving {0,1}
/// extension in the class that admits no retraction.
pub fn main_negative() -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("main-negative");
    for d in enumerate_small_lattices(8, LatticeFilter::distributive())? {
        for &class_dim in &CLASSES {
            let class = ClassId::Dfin(class_dim);
            if !class.contains(&d) {
                continue;
            }
            match classify_absolute_retract(&d, class, DEFAULT_SEARCH_BOUND)? {
                Verdict::IsAbsoluteRetract { .. } => {
                    let expected = d.is_boolean()
                        || (matches!(class_dim, Dim::Finite(n) if order_dimension(&d).ok() == Some(n))
                            && crate::chains::grid_embed(&d).is_ok_and(|e| e.is_bijective()));
                    out.check(expected, || format!("D = {} wrongly positive for {class}", describe(&d)));
                }
                Verdict::Not(r) => {
                    let c = r.certificate;
                    out.check(c.holds() && c.retraction_found == Some(false) && !d.is_boolean(), || {
                        format!("D = {} class {class}: {:?}", describe(&d), c)
                    });
                }
            }
        }
    }
    Ok(out)
}

/// No slim semimodular lattice with 2 to 6 elements is a retract of its witness extension.
pub fn theorem1() -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("theorem1");
    for l in enumerate_small_lattices(6, LatticeFilter::slim_semimodular())? {
        if l.len() < 2 {
            continue;
        }
        match theorem1_witness(&l, None) {
            Ok(w) => {
                let mut ok = !w.retraction_found && w.swing_holds();
                if l.len() == 2 {
                    ok &= w.t == 3 && are_isomorphic(w.k.lattice(), s7_family(3).lattice());
                }
                out.check(ok, || format!("L = {} retraction found: {}", describe(&l), w.retraction_found));
            }
            Err(e) => out.check(false, || format!("L = {}: {e}", describe(&l))),
        }
    }
    Ok(out)
}

/// Forks on `B2` give `S7`; random fork scripts keep slimness and
/// semimodularity and add exactly one to the length at each step.
pub fn forks(opts: &VerifyOptions) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("forks");
    let s7 = crate::lattice::build_lattice(
        ["0", "u", "v", "l", "m", "r", "1"],
        [("0", "u"), ("0", "v"), ("u", "l"), ("u", "m"), ("v", "m"), ("v", "r"), ("l", "1"), ("m", "1"), ("r", "1")],
    )?;
    let first = s7_family(1);
    out.check(first.lattice().len() == 7 && are_isomorphic(first.lattice(), &s7), || "B2 fork is not S7".into());

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.fork_scripts {
        let base = (rng.gen_range(2..=4), rng.gen_range(2..=4));
        let mut d = SlimDiagram::grid(base.0, base.1)?;
        let mut script = ForkScript { base_grid_sizes: base, steps: Vec::new() };
        for _ in 0..rng.gen_range(1..=4) {
            let cell = d.cells().choose(&mut rng).expect("grids have cells").clone();
            let (len, size, cells) = (d.lattice().length(), d.lattice().len(), d.cells().len());
            script.steps.push((cell.top.clone(), cell.left.clone()));
            match d.add_fork(&cell.top, &cell.left) {
                Ok(f) => {
                    let l = d.lattice();
                    out.check(
                        l.is_slim()
                            && l.is_semimodular()
                            && l.length() == len + 1
                            && l.len() == size + 1 + f.left_leg.len() + f.right_leg.len()
                            && l.four_cells().len() > cells,
                        || format!("script {script:?}"),
                    );
                }
                Err(e) => {
                    out.check(false, || format!("script {script:?}: {e}"));
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// The `m`-by-`n` grid has `mn` cells; a distributive lattice has length `|Ji|`.
pub fn grid_facts() -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("grid-facts");
    for m in 1..=4 {
        for n in 1..=4 {
            let g = make_grid(&[m + 1, n + 1])?.into_lattice();
            out.check(g.four_cells().len() == m * n, || format!("{m}-by-{n} grid"));
        }
    }
    for d in enumerate_small_lattices(8, LatticeFilter::distributive())? {
        out.check(d.length() == d.join_irreducibles().len(), || describe(&d));
    }
    Ok(out)
}

fn grid_shapes(max_size: usize, dim: usize) -> Vec<Vec<usize>> {
    if dim == 0 {
        return vec![Vec::new()];
    }
    let mut shapes = Vec::new();
    for first in 2..=max_size {
        for rest in grid_shapes(max_size / first, dim - 1) {
            let mut s = vec![first];
            s.extend(rest);
            shapes.push(s);
        }
    }
    shapes
}

/// Every full-dimensional grid sublattice of a grid with at most 16 elements
/// is recovered from its projections.
pub fn subgrids() -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("subgrids");
    for dim in 1..=4 {
        for shape in grid_shapes(16, dim) {
            if shape.windows(2).any(|w| w[0] < w[1]) {
                continue;
            }
            let k = make_grid(&shape)?;
            for sub_shape in grid_shapes(k.lattice().len(), dim) {
                if sub_shape.windows(2).any(|w| w[0] < w[1]) || sub_shape.iter().zip(&shape).any(|(a, b)| a > b) {
                    continue;
                }
                let pattern = make_grid(&sub_shape)?.into_lattice();
                for copy in sublattice_copies(&pattern, k.lattice()) {
                    out.check(membership_formula_holds(&k, &copy), || format!("K = {shape:?} L = {copy:?}"));
                }
            }
        }
    }
    Ok(out)
}

fn membership_formula_holds(k: &Grid, sub: &[usize]) -> bool {
    let Ok(chains) = k.recover_subgrid_chains(sub) else {
        return false;
    };
    k.lattice()
        .elements()
        .all(|x| (0..k.dimension()).all(|j| chains[j].contains(&k.projection(j, x))) == sub.contains(&x))
}

/// In `S7^(t)`, `t ≤ 4`, two distinct inner coatoms generate a congruence
/// collapsing all inner coatoms with the top.
pub fn swing() -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("swing");
    for t in 2..=4 {
        let d = s7_family(t);
        let l = d.lattice();
        let a = d.inner_coatoms();
        for i in 0..t {
            for j in 0..t {
                if i == j {
                    continue;
                }
                let theta = congruence_generated_by(l, &[(a[i], a[j])])?;
                out.check(a.iter().all(|&x| theta.related(x, l.top())), || format!("t = {t}, pair ({}, {})", i + 1, j + 1));
            }
        }
    }
    Ok(out)
}

/// Cover-preserving {0,1}-maps versus equal-length embeddings, on homomorphisms between small
/// semimodular lattices and on sublattice inclusions up to 10 elements.
pub fn cover01() -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("cover01");
    let small = enumerate_small_lattices(5, LatticeFilter { semimodular: true, ..LatticeFilter::default() })?;
    for s in &small {
        for t in &small {
            for_each_homomorphism(s, t, |map| {
                let f = Homomorphism::new(s, t, map.to_vec()).expect("search yields homomorphisms");
                let ok = check_cover01(&f).is_ok();
                out.check(ok, || format!("{} → {} by {map:?}", describe(s), describe(t)));
                true
            });
        }
    }

    let mut hosts = enumerate_small_lattices(8, LatticeFilter { semimodular: true, ..LatticeFilter::default() })?;
    hosts.extend(enumerate_small_lattices(10, LatticeFilter::distributive())?.into_iter().filter(|k| k.len() > 8));
    for k in &hosts {
        for a in all_sublattices(k) {
            let (sub, back) = k.induced(&a)?;
            if !sub.is_semimodular() {
                continue;
            }
            let inclusion = Homomorphism::new(&sub, k, back.clone())?;
            let Ok(report) = check_cover01(&inclusion) else {
                out.check(false, || format!("K = {} A = {a:?}", describe(k)));
                continue;
            };
            let mut ok = report.is_embedding;
            if report.is_cover01 {
                let search = exists_retraction(k, &a, SearchMode::First)?;
                ok &= search.retraction.is_none() || a.len() == k.len();
            }
            out.check(ok, || format!("K = {} A = {a:?}", describe(k)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        assert!(grid_shapes(16, 2).contains(&vec![4, 4]));
        assert!(grid_shapes(16, 4).contains(&vec![2, 2, 2, 2]));
        assert!(!grid_shapes(16, 2).contains(&vec![3, 6]));
    }

    #[test]
    fn quick_suites_pass() {
        for name in ["grid-facts", "swing"] {
            let o = run_suite(name, &VerifyOptions::default()).unwrap();
            assert!(o.passed(), "{name}: {:?}", o.failures);
        }
    }
}

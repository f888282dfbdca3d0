//! Equation systems whose solvability in a sublattice `A ⊆ B` is equivalent
//! to `A` being a retract of `B`.
//!
//! For every ordered pair `(a, b)` of `B` with at least one element outside
//! `A` there is one join and one meet equation. An element of `A` appears as
//! itself (a parameter); every other element `b` is replaced by the unknown
//! `x_b`. So `a ∨ b = c` with `a` old, `b` new and `c` old becomes
//! `a ∨ x_b ≈ c`, while with `c` new it becomes `a ∨ x_b ≈ x_c`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::FiniteLattice;
use crate::retract::Homomorphism;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Join,
    Meet,
}

/// One side of an equation: an element of `A` or the unknown `x_b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "element", rename_all = "lowercase")]
pub enum Term {
    Param(usize),
    Unknown(usize),
}

impl Term {
    fn eval(self, values: &[Option<usize>]) -> Option<usize> {
        match self {
            Term::Param(a) => Some(a),
            Term::Unknown(b) => values[b],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Equation {
    pub op: Op,
    pub left: Term,
    pub right: Term,
    pub result: Term,
}

#[derive(Clone, Debug)]
pub struct EquationSystem {
    ambient: FiniteLattice,
    sub: Vec<usize>,
    unknowns: Vec<usize>,
    equations: Vec<Equation>,
}

/// Values for the unknowns, as `(b, u_b)` pairs in unknown order.
pub type Assignment = Vec<(usize, usize)>;

pub fn build_equation_system(b: &FiniteLattice, a: &[usize]) -> Result<EquationSystem> {
    if !b.check_sublattice(a) {
        return Err(Error::NotASublattice);
    }
    let mut old = vec![false; b.len()];
    a.iter().for_each(|&x| old[x] = true);
    if old.iter().all(|&o| o) {
        return Err(Error::NotProper);
    }
    let term = |x: usize| if old[x] { Term::Param(x) } else { Term::Unknown(x) };
    let mut equations = Vec::new();
    for x in b.elements() {
        for y in b.elements() {
            if old[x] && old[y] {
                continue;
            }
            equations.push(Equation { op: Op::Join, left: term(x), right: term(y), result: term(b.join(x, y)) });
            equations.push(Equation { op: Op::Meet, left: term(x), right: term(y), result: term(b.meet(x, y)) });
        }
    }
    let mut sub = a.to_vec();
    sub.sort_unstable();
    sub.dedup();
    let unknowns = b.elements().filter(|&x| !old[x]).collect();
    Ok(EquationSystem { ambient: b.clone(), sub, unknowns, equations })
}

impl EquationSystem {
    pub fn ambient(&self) -> &FiniteLattice {
        &self.ambient
    }

    pub fn sub(&self) -> &[usize] {
        &self.sub
    }

    pub fn unknowns(&self) -> &[usize] {
        &self.unknowns
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    fn holds(&self, e: &Equation, values: &[Option<usize>]) -> Option<bool> {
        let l = &self.ambient;
        let (x, y, r) = (e.left.eval(values)?, e.right.eval(values)?, e.result.eval(values)?);
        Some(match e.op {
            Op::Join => l.join(x, y) == r,
            Op::Meet => l.meet(x, y) == r,
        })
    }

    /// Whether `values[b]` (indexed by ambient element) satisfies every
    /// equation; parameters are read as themselves.
    pub fn is_satisfied_by(&self, values: &[usize]) -> bool {
        let v: Vec<Option<usize>> = values.iter().map(|&x| Some(x)).collect();
        self.equations.iter().all(|e| self.holds(e, &v) == Some(true))
    }

    /// Equations grouped by the last unknown (in unknown order) they mention,
    /// so each can be checked as soon as it is fully assigned.
    fn schedule(&self) -> Vec<Vec<usize>> {
        let mut pos = vec![usize::MAX; self.ambient.len()];
        self.unknowns.iter().enumerate().for_each(|(i, &b)| pos[b] = i);
        let mut by_last = vec![Vec::new(); self.unknowns.len()];
        for (k, e) in self.equations.iter().enumerate() {
            let last = [e.left, e.right, e.result]
                .iter()
                .filter_map(|t| match t {
                    Term::Unknown(b) => Some(pos[*b]),
                    Term::Param(_) => None,
                })
                .max()
                .expect("every equation mentions an unknown");
            by_last[last].push(k);
        }
        by_last
    }

    fn backtrack(
        &self,
        depth: usize,
        schedule: &[Vec<usize>],
        values: &mut Vec<Option<usize>>,
        visit: &mut dyn FnMut(&[Option<usize>]) -> bool,
    ) -> bool {
        if depth == self.unknowns.len() {
            return visit(values);
        }
        let b = self.unknowns[depth];
        for &u in &self.sub {
            values[b] = Some(u);
            if schedule[depth].iter().all(|&k| self.holds(&self.equations[k], values) == Some(true))
                && !self.backtrack(depth + 1, schedule, values, visit)
            {
                values[b] = None;
                return false;
            }
        }
        values[b] = None;
        true
    }

    fn search(&self, visit: &mut dyn FnMut(&[Option<usize>]) -> bool) {
        let schedule = self.schedule();
        let mut values = vec![None; self.ambient.len()];
        self.backtrack(0, &schedule, &mut values, visit);
    }

    /// A solution in `A`, if any.
    pub fn solve(&self) -> Option<Assignment> {
        let mut found = None;
        self.search(&mut |v| {
            found = Some(self.unknowns.iter().map(|&b| (b, v[b].unwrap())).collect());
            false
        });
        found
    }

    /// Number of solutions in `A`.
    pub fn count_solutions(&self) -> u64 {
        let mut n = 0;
        self.search(&mut |_| {
            n += 1;
            true
        });
        n
    }

    /// The map fixing `A` and sending each new `b` to `u_b`, verified as a
    /// homomorphism `B → B`.
    pub fn induced_map(&self, assignment: &Assignment) -> Result<Homomorphism> {
        let mut map: Vec<usize> = self.ambient.elements().collect();
        for &(b, u) in assignment {
            map[b] = u;
        }
        Homomorphism::new(&self.ambient, &self.ambient, map)
    }
}

/// Solves the system and returns the induced retraction.
pub fn solve_equation_system(sys: &EquationSystem) -> Option<(Assignment, Homomorphism)> {
    let assignment = sys.solve()?;
    let f = sys.induced_map(&assignment).expect("solutions induce homomorphisms");
    Some((assignment, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn three_chain_over_ends() {
        let c3 = FiniteLattice::chain(3);
        let sys = build_equation_system(&c3, &[0, 2]).unwrap();
        assert_eq!(sys.unknowns(), &[1]);
        assert_eq!(sys.equations().len(), 10);
        assert_eq!(sys.count_solutions(), 2);
        let (_, f) = solve_equation_system(&sys).unwrap();
        assert!(f.is_retraction_onto(&[0, 2]));
    }

    #[test]
    fn square_over_chain() {
        let b2 = make_grid(&[2, 2]).unwrap().into_lattice();
        let a = b2.indices_of(&["(0,0)", "(1,0)", "(1,1)"]).unwrap();
        let sys = build_equation_system(&b2, &a).unwrap();
        let [p, x, top, bot] = ["(1,0)", "(0,1)", "(1,1)", "(0,0)"].map(|s| b2.index_of(s).unwrap());
        assert_eq!(sys.unknowns(), &[x]);
        assert!(sys.equations().contains(&Equation {
            op: Op::Join,
            left: Term::Unknown(x),
            right: Term::Param(p),
            result: Term::Param(top)
        }));
        assert!(sys.equations().contains(&Equation {
            op: Op::Meet,
            left: Term::Unknown(x),
            right: Term::Param(p),
            result: Term::Param(bot)
        }));
        assert!(sys.solve().is_none());
    }

    #[test]
    fn identity_always_satisfies() {
        let g = make_grid(&[3, 2]).unwrap().into_lattice();
        let sys = build_equation_system(&g, &[g.bottom(), g.top()]).unwrap();
        let id: Vec<usize> = g.elements().collect();
        assert!(sys.is_satisfied_by(&id));
        assert_eq!(sys.equations().len(), 2 * (36 - 4));
    }

    #[test]
    fn whole_lattice_is_not_proper() {
        let c2 = FiniteLattice::chain(2);
        assert_eq!(build_equation_system(&c2, &[0, 1]).unwrap_err(), Error::NotProper);
    }
}

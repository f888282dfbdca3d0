//! Brute-force ground truth: homomorphism search, equation systems,
//! congruence generation and small-lattice enumeration.

pub mod congruence;
pub mod enumerate;
pub mod equations;
pub mod search;

pub use congruence::congruence_generated_by;
pub use enumerate::{canonical_code, enumerate_small_lattices, LatticeFilter};
pub use equations::{build_equation_system, solve_equation_system, Assignment, Equation, EquationSystem, Op, Term};
pub use search::{are_isomorphic, exists_retraction, find_embedding, find_isomorphism, RetractionSearch, SearchMode};

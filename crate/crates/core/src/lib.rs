//! Finite lattices, grid embeddings, retractions and absolute retracts.

pub mod chains;
pub mod error;
pub mod grid;
pub mod io;
pub mod lattice;
pub mod oracle;
pub mod retract;
pub mod slim;
pub mod verify;

pub use error::{Error, Result};
pub use lattice::{build_lattice, FiniteLattice, FourCell, PropertyReport};

use thiserror::Error;

/// Errors raised by lattice construction and the constructions built on top of it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("lattice has no elements")]
    Empty,
    #[error("duplicate element identifier `{0}`")]
    DuplicateElement(String),
    #[error("cover ({0}, {1}) refers to an undeclared element")]
    UnknownElement(String, String),
    #[error("cover relation contains a cycle through `{0}`")]
    CycleDetected(String),
    #[error("declared cover ({0}, {1}) is implied transitively")]
    NonReducedCovers(String, String),
    #[error("pair ({0}, {1}) has no unique join or meet")]
    NotALattice(String, String),

    #[error("lattice is not distributive")]
    NotDistributive,
    #[error("lattice is not semimodular")]
    NotSemimodular,
    #[error("lattice is not slim semimodular")]
    NotSlimSemimodular,
    #[error("operation requires at least two elements")]
    TrivialLattice,
    #[error("lattice is not a chain")]
    NotAChain,
    #[error("subset is empty")]
    EmptySubset,
    #[error("subset is not a sublattice")]
    NotASublattice,
    #[error("chain decomposition produced an empty chain at position {0}")]
    EmptyChainProduced(usize),

    #[error("grid factor {index} has size {size}; every factor needs at least two elements")]
    TrivialFactor { index: usize, size: usize },
    #[error("grid needs at least one factor")]
    NoFactors,
    #[error("subset is not a full-dimensional subgrid")]
    NotASubgrid,
    #[error("subset is not a filter")]
    NotAFilter,
    #[error("subset is not an ideal")]
    NotAnIdeal,
    #[error("map is not an order isomorphism")]
    NotIsomorphism,
    #[error("every factor of the grid has two elements")]
    BooleanInput,

    #[error("map is not a lattice homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("sublattice is not boolean")]
    NotBooleanSublattice,
    #[error("sublattice is neither boolean nor a grid of the ambient dimension")]
    NotEligible,
    #[error("lattice is not a member of class {0}")]
    NotInClass(String),

    #[error("no 4-cell with top `{top}` and left corner `{left}`")]
    NotA4Cell { top: String, left: String },
    #[error("validation failed: {0}")]
    ValidationFailed(String),
    #[error("lattice needs at least two elements")]
    TooSmall,
    #[error("no slim rectangular extension found within the search bound")]
    NoRectangularExtensionFound,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("sublattice equals the whole lattice")]
    NotProper,
    #[error("requested size {requested} exceeds the enumeration ceiling {ceiling}")]
    CeilingExceeded { requested: usize, ceiling: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

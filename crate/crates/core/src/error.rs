use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("register size mismatch: expected {expected} qubits, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("unsupported register size {0} (must be 1..=64)")]
    InvalidQubitCount(usize),

    #[error("cannot place a {len}-qubit string at offset {offset} in a {total}-qubit register")]
    OffsetOutOfRange {
        offset: usize,
        len: usize,
        total: usize,
    },

    #[error("invalid site map: {0}")]
    InvalidSiteMap(String),

    #[error("cannot parse Pauli string {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("rotation generator {0} carries a nonzero phase")]
    NonzeroPhase(String),

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("{what} is limited to {max} qubits, got {n}")]
    TooLarge {
        what: &'static str,
        n: usize,
        max: usize,
    },

    #[error(
        "eigensolver did not converge after {iterations} iterations \
         (best estimate {estimate}, residual {residual:.3e})"
    )]
    NoConvergence {
        estimate: f64,
        residual: f64,
        iterations: usize,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("operator pool is empty")]
    EmptyPool,

    #[error("invalid tile set: {0}")]
    InvalidTiles(String),

    #[error("inconsistent run records: {0}")]
    InconsistentRecords(String),

    #[error("parameter vector has length {found}, ansatz has {expected} entries")]
    ParameterCount { expected: usize, found: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

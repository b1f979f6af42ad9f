use thiserror::Error;

/// Errors produced by the library.
///
/// Row, column and node indices are stored 0-based; the `Display` output
/// reports them 1-based to match the external file formats.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: row {} has {len} entries, expected {expected}", .row + 1)]
    NonSquare { row: usize, len: usize, expected: usize },

    #[error("network needs at least {min} nodes, got {n}")]
    TooSmall { n: usize, min: usize },

    #[error("entry ({}, {}) is not a finite number", .row + 1, .col + 1)]
    NonFinite { row: usize, col: usize },

    #[error("entry ({}, {}) is negative: {value}", .row + 1, .col + 1)]
    NegativeEntry { row: usize, col: usize, value: f64 },

    #[error("diagonal entry of node {} is nonzero: {value}", .node + 1)]
    DiagonalNonzero { node: usize, value: f64 },

    #[error("row {} sums to {sum}, expected 1", .row + 1)]
    RowSumOutOfTolerance { row: usize, sum: f64 },

    #[error("dominant eigenvector did not converge within {max_iters} iterations")]
    NoConvergence { max_iters: usize },

    #[error("vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vector is not in the simplex: {reason}")]
    NotInSimplex { reason: String },

    #[error("invalid initial condition: {0}")]
    InvalidInitial(String),

    #[error("operation requires a {expected} network")]
    StructureMismatch { expected: &'static str },

    #[error("largest centrality {max} is at least 1/2; no interior equilibrium exists")]
    CenterDominant { max: f64 },

    #[error("equilibrium solver needs at least 2 entries, got {len}")]
    DimensionTooSmall { len: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("mass drifted by {drift:e} at step {step}")]
    MassDrift { step: usize, drift: f64 },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("node {node} does not seek advice from anyone")]
    EmptyAdviceSet { node: usize },

    #[error("trajectory is empty")]
    EmptyTrajectory,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

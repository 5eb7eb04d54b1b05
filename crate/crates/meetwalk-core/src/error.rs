//! Error type shared across the crate.
//!
//! Variants are grouped so a caller (e.g. the CLI) can map them onto
//! coarse failure categories: validation, resource budget, I/O.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A digraph violated a structural invariant (index range, duplicate
    /// edge, non-positive weight).
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    /// A matrix violated a structural invariant (row sums, sign constraints).
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    /// Equal-neighbor construction hit a node with no out-neighbors and
    /// self-loops disabled.
    #[error("zero out-degree row at node {node}")]
    ZeroOutDegreeRow {
        /// Offending node, 1-based.
        node: usize,
    },

    /// Operands have different dimensions.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// A generator or operation received invalid parameters.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A file could not be parsed. `line` is set when the underlying JSON
    /// parser reports one; semantic violations name the offending record.
    #[error("parse error in {path}{}: {msg}", line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    Parse {
        path: String,
        line: Option<usize>,
        msg: String,
    },

    /// Requested a stationary distribution of a chain with several
    /// absorbing classes.
    #[error("stationary distribution not unique: {classes} absorbing classes")]
    StationaryNotUnique { classes: usize },

    /// An operation required an irreducible chain.
    #[error("matrix is reducible")]
    Reducible,

    /// Mean meeting time requested outside its domain of definition.
    #[error("mean meeting time undefined: stationary distributions not unique or meeting times not finite")]
    UndefinedMean,

    /// Product state space larger than the configured budget.
    #[error("state budget exceeded: {states} product states > budget {budget}")]
    StateBudgetExceeded { states: u128, budget: usize },

    /// Hitting-time query with an empty target set.
    #[error("empty target set")]
    EmptyTargets,

    /// A node index outside `1..=n` (reported 1-based, matching file
    /// formats and CLI output).
    #[error("node index {index} out of range 1..={n}")]
    NodeOutOfRange { index: usize, n: usize },

    /// Agent list was empty where at least one chain is required.
    #[error("empty chain list: need at least one pursuer and one evader")]
    EmptyChainList,

    /// An iterative or direct solve failed to produce a usable solution.
    #[error("linear solve failed: {0}")]
    Solver(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

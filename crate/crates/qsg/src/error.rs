//! Error and resource-budget types shared across the crate.

use thiserror::Error;

/// Errors produced by parsers, constructors and solvers.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("vertex `{0}` has no outgoing edge")]
    DeadEnd(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),

    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(String, String),

    #[error("budget exceeded while {what}: needs {needed}, cap is {cap}")]
    Resource { what: String, needed: u128, cap: u128 },

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn resource(what: impl Into<String>, needed: u128, cap: u128) -> Self {
        Error::Resource { what: what.into(), needed, cap }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Caps for the enumeration-heavy solvers. Every exponential loop in the
/// crate checks one of these before it starts and reports the required
/// size when it refuses.
#[derive(Debug, Clone)]
pub struct Budget {
    /// Reachable-state cap for the extended arena V x 2^V.
    pub max_ext_states: usize,
    /// Simple-cycle cap per enumeration scope.
    pub max_cycles: usize,
    /// Memoryless-strategy cap per enumeration.
    pub max_strategies: usize,
    /// Candidate cap for the gap-decider strategy search.
    pub max_gap_candidates: u128,
    /// Cell cap for region boolean operations.
    pub max_region_cells: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_ext_states: 1 << 16,
            max_cycles: 1_000_000,
            max_strategies: 1 << 16,
            max_gap_candidates: 1 << 20,
            max_region_cells: 200_000,
        }
    }
}

impl Budget {
    /// Default budget, with every cap overridden by the `QSG_BUDGET`
    /// environment variable when it is set to a positive integer.
    pub fn from_env() -> Self {
        let mut budget = Budget::default();
        if let Ok(s) = std::env::var("QSG_BUDGET") {
            if let Ok(n) = s.trim().parse::<u128>() {
                if n > 0 {
                    budget.max_ext_states = n.min(usize::MAX as u128) as usize;
                    budget.max_cycles = n.min(usize::MAX as u128) as usize;
                    budget.max_strategies = n.min(usize::MAX as u128) as usize;
                    budget.max_gap_candidates = n;
                    budget.max_region_cells = n.min(usize::MAX as u128) as usize;
                }
            }
        }
        budget
    }
}

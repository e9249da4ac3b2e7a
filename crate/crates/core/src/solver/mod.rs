//! Deciding QBF instances: the internal search, a brute-force reference
//! evaluator, and an adapter for external solvers.

mod brute;
#[cfg(feature = "external")]
mod external;
mod search;

use serde::Serialize;
use thiserror::Error;

use crate::qbf::QbfError;

pub use crate::qbf::Format;
pub use brute::{brute_eval, BRUTE_LIMIT};
#[cfg(feature = "external")]
pub use external::{solve_external, ExternalError};
pub use search::solve;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Status {
    #[serde(rename = "SAT")]
    Sat,
    #[serde(rename = "UNSAT")]
    Unsat,
}

impl Status {
    pub fn is_sat(self) -> bool {
        self == Status::Sat
    }

    pub fn from_bool(sat: bool) -> Status {
        if sat {
            Status::Sat
        } else {
            Status::Unsat
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(if self.is_sat() { "SAT" } else { "UNSAT" })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SolveStats {
    pub decisions: u64,
    pub propagations: u64,
    pub memo_hits: u64,
    pub time_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveResult {
    pub status: Status,
    /// Values of the outermost block run, present when the run is
    /// existential and the answer SAT, or universal and the answer UNSAT.
    pub certificate: Option<Vec<(u32, bool)>>,
    pub stats: SolveStats,
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Maximum number of branching decisions.
    pub budget: Option<u64>,
    pub propagate: bool,
    pub memo: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { budget: None, propagate: true, memo: true }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("decision budget exceeded after {decisions} decisions")]
    BudgetExceeded { decisions: u64 },
    #[error("instance has {atoms} variables, over the brute-force limit of {limit}")]
    TooManyAtoms { atoms: usize, limit: usize },
    #[error("malformed instance: {0}")]
    Instance(QbfError),
}

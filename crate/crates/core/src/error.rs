use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported range: {0}")]
    UnsupportedRange(String),

    #[error("no sign change for n = {n} in [{lo}, {hi}] (after widening)")]
    Bracket { n: usize, lo: f64, hi: f64 },

    #[error("inconsistent input: {0}")]
    Inconsistency(String),

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("matrix of order {requested} exceeds memory budget; largest feasible order is {max_feasible}")]
    MemoryBudget { requested: usize, max_feasible: usize },

    #[error("record {n}: {source}")]
    Record { n: usize, source: Box<Error> },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_finite(y: f64, what: &str) -> Result<()> {
    if y.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must be finite, got {y}")))
    }
}

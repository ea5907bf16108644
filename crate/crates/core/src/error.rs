use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),

    /// A combinatorial search ran out of its node budget. `best` carries the
    /// best value seen so far, which is an upper bound but not a certified
    /// optimum.
    #[error("search limit exceeded after {budget} nodes{}", best_suffix(.best))]
    SearchLimit { budget: u64, best: Option<String> },

    #[error("cover window {window} too small; certified bound requires {required}")]
    WindowTooSmall { window: i64, required: i64 },

    #[error("construction failed: {0}")]
    Construction(String),

    /// An inequality that holds mathematically failed on computed data.
    #[error("check failed: {0}")]
    CheckFailed(String),
}

fn best_suffix(best: &Option<String>) -> String {
    match best {
        Some(b) => format!(" (best so far, not certified: {b})"),
        None => String::new(),
    }
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Validation(msg.into()))
}

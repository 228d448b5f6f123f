use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed or out-of-range input.
    #[error("input error: {0}")]
    Input(String),

    /// Operation requires the other generator mode.
    #[error("mode error: {0}")]
    Mode(String),

    /// A text file failed to parse; `line` is 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A size or explosion guard refused the request.
    #[error("guard: {0}")]
    Guard(String),

    /// An iterative method did not converge; `partial` is the last estimate.
    #[error("numerical error: {msg} (partial estimate {partial})")]
    Numerical { msg: String, partial: f64 },

    /// Rational rounding could not find a nonnegative solution.
    #[error("infeasible: {0}")]
    Feasibility(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    /// True for errors caused by the caller's input rather than by numerics or guards.
    pub fn is_input(&self) -> bool {
        matches!(self, Error::Input(_) | Error::Mode(_) | Error::Parse { .. })
    }
}

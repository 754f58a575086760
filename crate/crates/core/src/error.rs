use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the domain of a special function or moment.
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    /// Complex argument on a branch cut.
    #[error("branch error in {op}: {msg}")]
    Branch { op: &'static str, msg: String },

    /// Moment-based coefficient generation ran out of digits.
    #[error("precision exhausted: beta[{index}] = {value} is not positive; raise decimal_digits")]
    PrecisionExhausted { index: usize, value: String },

    #[error("tridiagonal eigensolver did not converge for eigenvalue {index}")]
    NoConvergence { index: usize },

    #[error("nodes {index} and {next} of the combined rule collide")]
    NodeCollision { index: usize, next: usize },

    #[error("degenerate internality ratio: pi_{degree}(0) vanishes")]
    DegenerateRatio { degree: usize },

    #[error("integrand failed at node {index}: {msg}")]
    Integrand { index: usize, msg: String },

    #[error("unknown integrand {0:?}")]
    UnknownIntegrand(String),

    #[error("accuracy: {0}")]
    Accuracy(String),

    #[error("argument error: {0}")]
    Argument(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Whether the error stems from bad input rather than from numerics.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Domain { .. }
                | Error::Argument(_)
                | Error::Config(_)
                | Error::Parse(_)
                | Error::UnknownIntegrand(_)
        )
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "domain",
            Error::Branch { .. } => "branch",
            Error::PrecisionExhausted { .. } => "precision_exhausted",
            Error::NoConvergence { .. } => "no_convergence",
            Error::NodeCollision { .. } => "node_collision",
            Error::DegenerateRatio { .. } => "degenerate_ratio",
            Error::Integrand { .. } => "integrand",
            Error::UnknownIntegrand(_) => "unknown_integrand",
            Error::Accuracy(_) => "accuracy",
            Error::Argument(_) => "argument",
            Error::Config(_) => "config",
            Error::Parse(_) => "parse",
        }
    }

    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain {
            op,
            msg: msg.into(),
        }
    }

    pub(crate) fn branch(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Branch {
            op,
            msg: msg.into(),
        }
    }
}

use std::path::PathBuf;

/// Errors produced by policy construction, estimation, bound evaluation and
/// the experiment harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An operation that requires strictly positive probabilities was given a
    /// policy with a zero entry.
    #[error("strict positivity violated: {0}")]
    StrictPositivity(String),

    /// KL divergence is infinite: the first argument puts mass on an action
    /// the second assigns zero probability.
    #[error("kl divergence is infinite: p({action}) > 0 but q({action}) = 0")]
    InfiniteDivergence { action: usize },

    /// The behavior policy assigns zero probability to an action that was
    /// observed in the data.
    #[error("support violation: behavior policy is zero on observed action {action}")]
    SupportViolation { action: usize },

    /// A closed-form bound was evaluated outside its hypothesis.
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("i/o error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: msg.into(),
        }
    }
}

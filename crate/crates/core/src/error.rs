use thiserror::Error;

/// Errors raised by the game model, the simulator and the file formats.
#[derive(Debug, Error)]
pub enum Error {
    /// A value that violates a documented invariant. `field` names the
    /// offending field using a dotted path such as `schedule[1].params.need_prob`.
    #[error("invalid value for `{field}`: {reason}")]
    Invalid { field: String, reason: String },

    /// A caller broke an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Invalid {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// Prefixes the field path of an [`Error::Invalid`] with `prefix`.
    pub(crate) fn within(self, prefix: &str) -> Self {
        match self {
            Error::Invalid { field, reason } => Error::Invalid {
                field: format!("{prefix}.{field}"),
                reason,
            },
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

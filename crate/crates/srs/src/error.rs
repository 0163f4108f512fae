use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SrsError {
    /// An argument violated a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Two values that must live in the same domain do not.
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    /// A model was asked for a capability it does not expose
    /// (e.g. a pmf or a finite enumeration).
    #[error("model '{model}' does not support {capability}")]
    MissingCapability { model: String, capability: &'static str },

    /// A failure while processing one observation of a dataset.
    #[error("observation {index}: {source}")]
    Observation {
        index: usize,
        #[source]
        source: Box<SrsError>,
    },

    /// A numerical routine failed to converge or left its valid range.
    #[error("numerical error: {0}")]
    Numerical(String),
}

impl SrsError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        SrsError::InvalidArgument(msg.into())
    }

    pub fn mismatch(msg: impl Into<String>) -> Self {
        SrsError::DomainMismatch(msg.into())
    }

    pub fn at_observation(index: usize, source: SrsError) -> Self {
        SrsError::Observation {
            index,
            source: Box::new(source),
        }
    }
}

pub type Result<T> = std::result::Result<T, SrsError>;

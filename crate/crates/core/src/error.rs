use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("length mismatch: x has {x_len} entries, y has {y_len}")]
    LengthMismatch { x_len: usize, y_len: usize },

    #[error("need at least 3 observations, got {0}")]
    TooFewSamples(usize),

    #[error("non-finite value at row {row}{}", column.map(|c| alloc::format!(", column {c}")).unwrap_or_default())]
    NonFinite { row: usize, column: Option<usize> },

    #[error("feature {feature}: {source}")]
    Feature {
        feature: usize,
        #[source]
        source: alloc::boxed::Box<Error>,
    },

    #[error("invalid matrix shape: {0}")]
    Shape(String),

    #[error("duplicate feature name {0:?}")]
    DuplicateName(String),

    #[error("{name} = {value} is outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("degenerate moment profile: {0} vanishes")]
    DegenerateProfile(&'static str),

    #[error("invalid simulation design: {0}")]
    Design(String),

    #[error("replicate {replicate}: {source}")]
    Replicate {
        replicate: usize,
        #[source]
        source: alloc::boxed::Box<Error>,
    },
}

impl Error {
    pub(crate) fn at_feature(self, feature: usize) -> Self {
        Error::Feature {
            feature,
            source: alloc::boxed::Box::new(self),
        }
    }

    pub(crate) fn domain(name: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            domain,
        }
    }

    /// Feature index attached to this error, if any.
    pub fn feature(&self) -> Option<usize> {
        match self {
            Error::Feature { feature, .. } => Some(*feature),
            Error::NonFinite { column, .. } => *column,
            Error::Replicate { source, .. } => source.feature(),
            _ => None,
        }
    }

    /// Innermost error with feature/replicate context stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::Feature { source, .. } | Error::Replicate { source, .. } => source.root(),
            other => other,
        }
    }
}

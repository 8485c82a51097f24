use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A scalar parameter fell outside the range an operation is defined on.
    #[error("{param} = {value} is outside the allowed range {range}")]
    Domain {
        param: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("state is not normalized (squared norm {norm_sq})")]
    NotNormalized { norm_sq: f64 },
    #[error("non-finite amplitude in {0}")]
    NonFinite(&'static str),
    #[error("basis vectors are not orthogonal (overlap² {overlap2})")]
    NotOrthogonal { overlap2: f64 },
    #[error("degenerate decomposition: {0}")]
    DegenerateDecomposition(String),
    #[error("cannot parse {what}: {reason}")]
    Parse { what: &'static str, reason: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Unsupported(String),
    /// Two independent evaluation routes disagreed beyond tolerance.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn domain(param: &'static str, value: f64, range: &'static str) -> Self {
        Error::Domain {
            param,
            value,
            range,
        }
    }
}

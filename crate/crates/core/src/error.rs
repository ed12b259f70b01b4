use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),

    #[error("no normal form available: {0}")]
    NoNormalForm(String),

    #[error("hom-set {from} -> {to} exceeds cap {cap} (saw at least {partial} morphisms)")]
    CapExceeded {
        from: String,
        to: String,
        cap: usize,
        partial: usize,
    },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("unknown object `{0}`")]
    UnknownObject(String),

    #[error("unknown cell `{0}`")]
    UnknownCell(String),

    #[error("basis anchor missing: {0}")]
    AnchorMissing(String),

    #[error("inconsistent boundary for cell `{cell}`: {reason}")]
    InconsistentBoundary { cell: String, reason: String },

    #[error("not a chain complex: {0}")]
    NotAComplex(String),

    #[error("not a chain map in degree {degree}: {reason}")]
    NotAChainMap { degree: usize, reason: String },

    #[error("fundamental category is not finite: {0}")]
    InfiniteFundamentalCategory(String),

    #[error("complex is not contractible: degree {degree} has homology {obstruction} at object `{object}`")]
    NotContractible {
        degree: usize,
        object: String,
        obstruction: String,
    },

    #[error("contraction does not satisfy ds + sd = 1: {0}")]
    ContractionInvalid(String),

    #[error("not a domination: {0}")]
    NotADomination(String),

    #[error("undecidable within configured bounds: {0}")]
    Undecidable(String),

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("{file}:{line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures that stem from bounded search running out of budget.
    pub fn is_undecidable(&self) -> bool {
        matches!(
            self,
            Error::NoNormalForm(_)
                | Error::CapExceeded { .. }
                | Error::Undecidable(_)
                | Error::InfiniteFundamentalCategory(_)
        )
    }
}

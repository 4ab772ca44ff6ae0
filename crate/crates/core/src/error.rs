use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("ring error: {0}")]
    Ring(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("multiplier invalid: {0}")]
    MultiplierInvalid(String),
    #[error("invalid form parameter: element {0} escapes Λ_max")]
    InvalidFormParameter(String),
    #[error("localization is zero: {0} is nilpotent")]
    LocalizationZero(String),
    #[error("ideal is not maximal")]
    InvalidIdeal,
    #[error("invalid group descriptor: {0}")]
    Descriptor(String),
    #[error("singular matrix")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("generator constraint violated: {0}")]
    Constraint(String),
    #[error("pairing error: ⟨v,w⟩ = {0} is not zero")]
    Pairing(String),
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported at this size: {0}")]
    Unsupported(String),
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse { pos: e.column(), msg: e.to_string() }
    }
}

impl Error {
    /// Stable kebab-case name, used in JSON reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Ring(_) => "ring",
            Error::Parse { .. } => "parse",
            Error::MultiplierInvalid(_) => "multiplier-invalid",
            Error::InvalidFormParameter(_) => "invalid-form-parameter",
            Error::LocalizationZero(_) => "localization-zero",
            Error::InvalidIdeal => "invalid-ideal",
            Error::Descriptor(_) => "descriptor",
            Error::Singular => "singular",
            Error::Dimension(_) => "dimension",
            Error::Constraint(_) => "constraint",
            Error::Pairing(_) => "pairing",
            Error::Certification(_) => "certification",
            Error::Precondition(_) => "precondition",
            Error::Unsupported(_) => "unsupported",
            Error::ResourceLimit(_) => "resource-limit",
            Error::Io(_) => "io",
        }
    }

    /// Stable positive code, distinct per variant.
    pub fn code(&self) -> i32 {
        match self {
            Error::Ring(_) => 1,
            Error::Parse { .. } => 2,
            Error::MultiplierInvalid(_) => 3,
            Error::InvalidFormParameter(_) => 4,
            Error::LocalizationZero(_) => 5,
            Error::InvalidIdeal => 6,
            Error::Descriptor(_) => 7,
            Error::Singular => 8,
            Error::Dimension(_) => 9,
            Error::Constraint(_) => 10,
            Error::Pairing(_) => 11,
            Error::Certification(_) => 12,
            Error::Precondition(_) => 13,
            Error::Unsupported(_) => 14,
            Error::ResourceLimit(_) => 15,
            Error::Io(_) => 16,
        }
    }
}

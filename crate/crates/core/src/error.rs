use thiserror::Error;

/// Errors raised by the library.
///
/// Every variant maps to a stable machine-readable code via [`Error::code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("field size {p}^{k} exceeds the bound {bound}")]
    FieldTooLarge { p: u64, k: u32, bound: u64 },
    #[error("extension degree must be positive, got {0}")]
    BadDegree(u32),
    #[error("relative extension degree must be 2, 3 or 4, got {0}")]
    BadExtensionDegree(u32),
    #[error("characteristic {0} unsupported")]
    UnsupportedCharacteristic(u64),
    #[error("field of size {0} too small, need q > 4")]
    FieldTooSmall(u64),
    #[error("target field is not a subfield of the source")]
    NotSubfield,
    #[error("points are not pairwise distinct")]
    RepeatedPoints,
    #[error("lambda must avoid 0 and 1")]
    DegenerateLambda,
    #[error("j undefined on discriminant-zero forms")]
    DiscriminantZero,
    #[error("form not in F+: I(f) is not a square")]
    NotInFPlus,
    #[error("zero form or zero vector")]
    ZeroInput,
    #[error("points are linearly dependent")]
    DependentPoints,
    #[error("coordinates violate the Plucker relation")]
    NotOnKleinQuadric,
    #[error("label {0:?} invalid for this field")]
    InvalidLabel(String),
    #[error("matrix is singular")]
    Singular,
    #[error("assumption m + 2 <= q violated (m = {m}, q = {q})")]
    AssumptionViolated { m: u32, q: u64 },
    #[error("value {0} is not an element of the field")]
    BadElement(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Short stable identifier for scripting.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "not-prime",
            Error::FieldTooLarge { .. } => "field-too-large",
            Error::BadDegree(_) => "bad-degree",
            Error::BadExtensionDegree(_) => "bad-extension-degree",
            Error::UnsupportedCharacteristic(_) => "unsupported-characteristic",
            Error::FieldTooSmall(_) => "field-too-small",
            Error::NotSubfield => "not-subfield",
            Error::RepeatedPoints => "repeated-points",
            Error::DegenerateLambda => "degenerate-lambda",
            Error::DiscriminantZero => "discriminant-zero",
            Error::NotInFPlus => "not-in-f-plus",
            Error::ZeroInput => "zero-input",
            Error::DependentPoints => "dependent-points",
            Error::NotOnKleinQuadric => "not-on-klein-quadric",
            Error::InvalidLabel(_) => "invalid-label",
            Error::Singular => "singular",
            Error::AssumptionViolated { .. } => "assumption-violated",
            Error::BadElement(_) => "bad-element",
            Error::NotPrimePower(_) => "not-prime-power",
            Error::Io(_) => "io",
        }
    }

    /// True for errors that mean the field itself is out of scope.
    pub fn is_unsupported_field(&self) -> bool {
        matches!(
            self,
            Error::UnsupportedCharacteristic(_) | Error::FieldTooSmall(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

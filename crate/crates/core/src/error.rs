use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("could not parse {what}: {detail}")]
    Parse { what: &'static str, detail: String },

    #[error("input is not an exact rational: {0}")]
    NotRational(String),

    #[error("matrix is singular")]
    SingularInput,

    #[error("no nonzero entries; the generated subgroup is trivial")]
    EmptyOrAllZero,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("elements do not have the expected shape: {0}")]
    ShapeMismatch(String),

    #[error("vector ({0}, {1}) is not primitive")]
    NotPrimitive(i64, i64),

    #[error("linear part has no eigenvalue 1")]
    NoUnitEigenvalue,

    #[error("unsupported presentation: {0}")]
    UnsupportedPresentation(String),

    #[error("action is not free: {0}")]
    NotFreeAction(String),

    #[error("automorphism constraint {item} violated: {detail}")]
    ConstraintViolation { item: u8, detail: String },

    #[error("base is not compact; the obstruction group is trivial")]
    NonCompactBase,

    #[error("the twisting moduli space is trivial")]
    TrivialAmbient,

    #[error("shift with k = {0} is not realisable on this series")]
    UnrealizableForm(i64),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("lattice column matrix is singular")]
    SingularLattice,

    #[error("gluing maps are not in a supported family: {0}")]
    UnrecognizedShape(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

impl Error {
    pub(crate) fn parse(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Parse { what, detail: detail.into() }
    }

    /// Errors that mean the input was well formed but violated a precondition.
    pub fn is_precondition(&self) -> bool {
        !matches!(self, Error::Parse { .. })
    }
}

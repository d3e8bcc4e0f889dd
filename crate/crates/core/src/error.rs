use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("ill-defined homomorphism: {0}")]
    IllDefinedHom(String),

    #[error("maps are not composable: {0}")]
    NotComposable(String),

    #[error("invalid group table: {0}")]
    InvalidGroupTable(String),

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),

    #[error("unsupported cohomological degree {0} (only 0, 1, 2)")]
    UnsupportedDegree(usize),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("sequence is not exact: {0}")]
    NotExact(String),

    #[error("invalid root datum: {0}")]
    InvalidDatum(String),

    #[error("cannot parse group spec `{spec}`: {reason}")]
    GroupSpec { spec: String, reason: String },

    #[error("degree {degree} out of range (max {max})")]
    DegreeOutOfRange { degree: usize, max: usize },

    #[error("schema violation at {location}: {reason}")]
    Schema { location: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

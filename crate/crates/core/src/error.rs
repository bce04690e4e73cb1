use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vector spaces do not match (dimension {left} vs {right})")]
    SpaceMismatch { left: usize, right: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("structure constants are not antisymmetric at f_({i},{j})^{k}")]
    NotAntisymmetric { i: usize, j: usize, k: usize },

    #[error("Jacobi identity fails for basis triple ({i}, {j}, {k}), component {l}: {value}")]
    Jacobi {
        i: usize,
        j: usize,
        k: usize,
        l: usize,
        value: String,
    },

    #[error("bilinear form rejected: {0}")]
    Form(String),

    #[error("complement rejected: {reason} (witness {witness:?})")]
    Complement { reason: String, witness: Vec<String> },

    #[error("complement is not admissible at this point (smallest singular value {margin:e})")]
    NotAdmissible { margin: f64 },

    #[error("invalid twist: {0}")]
    Twist(String),

    #[error("invalid rational {0:?}")]
    Rational(String),

    #[error("model error: {0}")]
    Model(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

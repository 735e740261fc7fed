use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (minimum eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("domain violation: eigenvalue {value:e} below floor {floor:e} for {function}")]
    DomainViolation {
        function: String,
        value: f64,
        floor: f64,
    },

    #[error("Jacobi eigensolver did not converge within {rotations} rotations")]
    NoConvergence { rotations: usize },

    #[error("trace has non-negligible imaginary part {imag:e} (scale {scale:e})")]
    ImaginaryTrace { imag: f64, scale: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("function class {class} is not covered by {case}")]
    UnsupportedClass { class: String, case: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::ShapeMismatch(msg.into())
    }

    /// True for rejections caused by the positivity floor or a PSD check,
    /// i.e. inputs outside an inequality's hypotheses rather than bugs.
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::DomainViolation { .. } | Error::NotPsd { .. })
    }
}

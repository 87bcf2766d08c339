use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("polynomial term {exponents:?} has degree {found}, expected {expected}")]
    NotHomogeneous {
        exponents: [u32; 4],
        expected: u32,
        found: u32,
    },

    #[error("Gram matrix of level {level} is numerically singular (smallest eigenvalue {min_eigenvalue:e})")]
    SingularGram { level: usize, min_eigenvalue: f64 },

    #[error("Hamiltonian eigenvalue {value} on level {level} lies below -1")]
    NegativeSpectrum { level: usize, value: f64 },

    #[error("Hamiltonian is not a multiple of the identity on level {level} (deviation {deviation:e})")]
    LevelNotScalar { level: usize, deviation: f64 },

    #[error("operator `{name}` is not Hermitian (deviation {deviation:e})")]
    NotHermitian { name: String, deviation: f64 },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("ambient radius vanishes; the map to the sphere is undefined")]
    ZeroAmbientRadius,

    #[error("state violates the constraint surface (|x.x - 1| = {norm_defect:e}, |x.p| = {orthogonality_defect:e})")]
    OffConstraintSurface {
        norm_defect: f64,
        orthogonality_defect: f64,
    },

    #[error("time step {dt} is under-resolved for period {period} (need dt < period / 10)")]
    UnderResolvedStep { dt: f64, period: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

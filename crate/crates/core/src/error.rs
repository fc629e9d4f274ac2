use thiserror::Error;

/// Errors raised by the sphere-dynamics routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is singular (|det| = {det:e})")]
    SingularMatrix { det: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operation not supported in dimension {0}")]
    DimensionUnsupported(usize),
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("matrix has real eigenvalues; a complex pair is required")]
    RealSpectrum,
    #[error("translation vector is zero; use the projective action")]
    ZeroTranslation,
    #[error("affine map is degenerate: |T^-1 a| is within tolerance of 1")]
    DegenerateMap,
    #[error("affine map is not injective: |T^-1 a| = {0:.6} > 1")]
    NonInjective(f64),
    #[error("invalid translation: {0}")]
    InvalidTranslation(String),
    #[error("resolvent parameter {0} collides with the spectrum")]
    SpectrumCollision(f64),
    #[error("matrix has no positive real eigenvalue")]
    NoPositiveRealEigenvalue,
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("matrix lies outside the covered classes: {0}")]
    OutsideCoveredClasses(String),
    #[error("matrix is not orthogonal (|T^T T - I| = {0:e})")]
    NotOrthogonal(f64),
    #[error("matrix is not unimodular (|det| = {0})")]
    NotUnimodular(f64),
    #[error("invalid semigroup specification: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = core::result::Result<T, Error>;

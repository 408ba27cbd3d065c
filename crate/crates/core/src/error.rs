use thiserror::Error;

/// Errors raised by the numerical operations of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix dimension {0} outside the supported range 2..=6")]
    InvalidDimension(usize),

    #[error("expected {expected} entries, got {actual}")]
    EntryCount { expected: usize, actual: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("determinant {det:e} is not positive")]
    NonpositiveDeterminant { det: f64 },

    #[error("certified margin unavailable: {0}")]
    CertificationUnavailable(String),

    #[error("eigenvalue within {tol:e} of zero; sign undecidable")]
    IllConditioned { tol: f64 },

    #[error("matrix margin {margin} is below delta = {delta}")]
    NotInCone { margin: f64, delta: f64 },

    #[error("angular hypothesis violated: <u,v> = {inner} < delta |u||v| = {bound}")]
    HypothesisViolated { inner: f64, bound: f64 },

    #[error("bad parameter: {0}")]
    BadParam(String),

    #[error("point lies outside the mapping domain")]
    OutsideDomain,

    #[error("point lies on the singular axis s(x) = 0")]
    OnSingularAxis,

    #[error("derivative undefined on a region interface")]
    OnInterface,

    #[error("target lies on the image curve (distance {distance:e})")]
    TargetOnImage { distance: f64 },

    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

pub type Result<T> = std::result::Result<T, Error>;

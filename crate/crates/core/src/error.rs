use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid superpotential: {0}")]
    InvalidPotential(String),

    #[error("coupling t must be nonzero")]
    ZeroCoupling,

    #[error("critical point of multiplicity > 1 near u = {0}")]
    DegenerateCritical(String),

    #[error("derivative polynomial is constant: no critical points")]
    NoCriticalPoints,

    #[error("truncation mismatch: {left} vs {right}")]
    TruncationMismatch { left: usize, right: usize },

    #[error("eta is singular")]
    SingularEta,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("symbol is not invertible at sample {0}")]
    SingularSymbol(usize),

    #[error("node ({0}, {1}) has no full central-difference stencil")]
    BoundaryNode(usize, usize),

    #[error("grid size {m} cannot represent Fourier modes up to {needed} (need M >= {min})")]
    AliasRisk { m: usize, needed: usize, min: usize },

    #[error("annulus too thin: {0} radial nodes (need at least 8)")]
    AnnulusTooThin(usize),

    #[error("radial profile is not decaying at the outer radius")]
    NonDecaying,

    #[error("stored connection disagrees with the metric field by {0:e}")]
    InconsistentConnection(f64),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("QR iteration did not converge")]
    NoConvergence,
}

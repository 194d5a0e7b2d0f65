use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("PoleOnDomain: potential has a pole at x = {x}")]
    PoleOnDomain { x: f64 },

    #[error("InvalidModel: {0}")]
    InvalidModel(String),

    #[error("ZeroOmega: omega must be nonzero (the D/2omega group is undefined)")]
    ZeroOmega,

    #[error("UnsupportedFamily: family {0} is not supported by this operation")]
    UnsupportedFamily(&'static str),

    #[error("DegenerateQuadratic: leading coefficient vanishes")]
    DegenerateQuadratic,

    #[error("NotNormalizable: ground state is not normalizable: {0}")]
    NotNormalizable(String),

    #[error("GridTooCoarse: {n_points} points (need at least {min})")]
    GridTooCoarse { n_points: usize, min: usize },

    #[error("InvalidGrid: {0}")]
    InvalidGrid(String),

    #[error("ConvergenceFailure: eigensolver failed to converge: {0}")]
    ConvergenceFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;

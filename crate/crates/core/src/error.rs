use thiserror::Error;

/// Errors raised by the exact algebra pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("ambient dimension m = {0} is not supported here (need m > 4)")]
    DimensionTooSmall(usize),

    #[error("Euler-rational scale has a pole at bidegree ({0}, {1})")]
    ZeroDenominator(u32, u32),

    #[error("polynomial is not bihomogeneous")]
    NotBihomogeneous,

    #[error("polynomial is not annihilated by both Laplacians")]
    NotDoubleHarmonic,

    #[error("normalising constant vanishes: component ({i}, {j}) is absent at bidegree ({p}, {q})")]
    ZeroNormalizer { i: u32, j: u32, p: u32, q: u32 },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("hypergeometric series does not terminate")]
    NonTerminating,

    #[error("lower parameter {0} is a pole of the series")]
    LowerParameterPole(String),

    #[error("gamma ratio hits a pole: {0}")]
    GammaPole(String),

    #[error("the sphere integral takes polynomials in x only")]
    NotXOnly,

    #[error("variable index {index} out of range for m = {m}")]
    VariableOutOfRange { index: usize, m: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

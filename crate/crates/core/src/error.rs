use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Selling parameter {index} is negative ({value})")]
    NegativeParameter { index: usize, value: f64 },

    #[error("Selling parameter {index} is not finite")]
    NonFinite { index: usize },

    #[error("degenerate cell: det A = {det}")]
    DegenerateCell { det: f64 },

    #[error("Gram matrix is not positive definite (leading minor {order} = {value})")]
    NotPositiveDefinite { order: usize, value: f64 },

    #[error("finite-difference stencil leaves the admissible cone at {point:?}")]
    DegenerateStencil { point: [f64; 6] },

    #[error("gradient of det A vanishes; tangent space undefined")]
    ZeroGradient,

    #[error("Jacobi iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("cannot parse Selling parameters: {0}")]
    Parse(String),

    #[error("invalid permutation images {0:?}")]
    InvalidPermutation([u8; 4]),

    #[error("check `{check}` failed at u = {u}")]
    AssertionFailure { check: &'static str, u: f64 },
}

impl Error {
    /// True for errors caused by a zero-volume or non-positive-definite
    /// lattice metric.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::DegenerateCell { .. }
                | Error::NotPositiveDefinite { .. }
                | Error::DegenerateStencil { .. }
        )
    }
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("index error: {0}")]
    Index(String),

    #[error("non-finite entry at flat offset {offset}")]
    NonFinite { offset: usize },

    #[error("singular value decomposition did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("matrix is singular: numerical rank {rank} < {size} (smallest singular value {sigma_min:e})")]
    SingularMatrix {
        rank: usize,
        size: usize,
        sigma_min: f64,
    },

    #[error("tensor is singular: unfolding rank {rank} < {size} (smallest singular value {sigma_min:e})")]
    SingularTensor {
        rank: usize,
        size: usize,
        sigma_min: f64,
    },

    #[error("capacitance tensor is singular: unfolding rank {rank} < {size}")]
    SingularCapacitance { rank: usize, size: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("reference solution is the zero tensor; normalized error is undefined")]
    DegenerateSolution,
}

impl Error {
    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    /// True for errors caused by a numerical failure rather than malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::SingularMatrix { .. }
                | Error::SingularTensor { .. }
                | Error::SingularCapacitance { .. }
                | Error::DegenerateSolution
        )
    }
}

use thiserror::Error;

use crate::exact::ExactError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("rank {rank} exceeds the configured capacity {bound}")]
    CapacityExceeded { rank: usize, bound: usize },
    #[error("structural mismatch: {0}")]
    Mismatch(String),
    #[error("element is not regular")]
    NotRegular,
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

use crate::space::Subset;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid point set: {0}")]
    InvalidPointSet(String),

    #[error("subset mask {mask:#b} uses bits beyond the {n} points of the space")]
    MaskOutOfRange { mask: u32, n: usize },

    #[error("open family is not a topology: {0}")]
    InvalidTopology(String),

    #[error("{what}: {n} points exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, n: usize, cap: usize },

    #[error("subset {0} is not open")]
    NotOpen(Subset),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("invalid compactness ideal: {0}")]
    InvalidIdeal(String),

    #[error("invalid proximity relation: {0}")]
    InvalidRelation(String),

    #[error("bases are defined over different hyperspaces")]
    MismatchedHyperspace,

    #[error("invalid argument: {0}")]
    InvalidSpec(String),

    #[error("invalid search target: {0}")]
    InvalidTarget(String),

    #[error("malformed witness: {0}")]
    MalformedWitness(String),

    #[error("{0}")]
    Parse(String),
}

impl Error {
    pub fn is_cap_exceeded(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}

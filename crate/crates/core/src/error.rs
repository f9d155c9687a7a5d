use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("fan is not simplicial: {0}")]
    NotSimplicial(String),
    #[error("fan is not complete: {0}")]
    NotComplete(String),
    #[error("fan is not projective: no strictly convex support function exists")]
    NotProjective,
    #[error("divisor is not Cartier on cone {cone:?}")]
    NotCartier { cone: Vec<usize> },
    #[error("{rays} rays exceed the subset cap of {cap}")]
    TooManyRays { rays: usize, cap: usize },
    #[error("chamber for alpha {alpha:?} is unbounded")]
    UnboundedContribution { alpha: Vec<usize> },
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("q = {q} is outside [0, {dim}]")]
    InvalidQ { q: i64, dim: usize },
    #[error("degree {degree} is outside [0, {dim}]")]
    InvalidDegree { degree: i64, dim: usize },
    #[error("figure requires Picard rank 2, got {0}")]
    UnsupportedRank(usize),
    #[error("cache error: {0}")]
    Cache(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Malformed(_) => "Malformed",
            Error::NotSimplicial(_) => "NotSimplicial",
            Error::NotComplete(_) => "NotComplete",
            Error::NotProjective => "NotProjective",
            Error::NotCartier { .. } => "NotCartier",
            Error::TooManyRays { .. } => "TooManyRays",
            Error::UnboundedContribution { .. } => "UnboundedContribution",
            Error::Unbounded => "Unbounded",
            Error::InvalidQ { .. } => "InvalidQ",
            Error::InvalidDegree { .. } => "InvalidDegree",
            Error::UnsupportedRank(_) => "UnsupportedRank",
            Error::Cache(_) => "Cache",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

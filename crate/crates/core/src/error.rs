use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("complex must have at least one vertex")]
    Empty,
    #[error("malformed edge ({0}, {1}): {2}")]
    MalformedEdge(usize, usize, &'static str),
    #[error("graph is disconnected: vertex {unreachable} is not reachable from vertex 0")]
    Disconnected { unreachable: usize },
    #[error("not a median graph: triple ({}, {}, {}) has {medians} medians", triple[0], triple[1], triple[2])]
    NotMedian { triple: [usize; 3], medians: usize },
    #[error("hyperplane class of edge ({0}, {1}) does not split the graph into two convex parts")]
    SeparationFailure(usize, usize),
    #[error("interval needs {chains} chains but the dimension is {dim}")]
    ChainCountExceeded { chains: usize, dim: usize },
    #[error("inconsistent pocset: {0}")]
    InconsistentSpec(String),
    #[error("pocset has {pairs} walls, at most {max} supported")]
    TooManyPairs { pairs: usize, max: usize },
    #[error("not a permutation of 0..{0}")]
    NotPermutation(usize),
    #[error("not an automorphism: edge ({0}, {1}) is not mapped to an edge")]
    NotAutomorphism(usize, usize),
}

impl Error {
    /// Short machine-readable tag, used on the CLI error stream.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Empty => "empty",
            Error::MalformedEdge(..) => "malformed-edge",
            Error::Disconnected { .. } => "disconnected",
            Error::NotMedian { .. } => "not-median",
            Error::SeparationFailure(..) => "separation-failure",
            Error::ChainCountExceeded { .. } => "chain-count-exceeded",
            Error::InconsistentSpec(_) => "inconsistent-spec",
            Error::TooManyPairs { .. } => "too-many-pairs",
            Error::NotPermutation(_) => "not-permutation",
            Error::NotAutomorphism(..) => "not-automorphism",
        }
    }
}

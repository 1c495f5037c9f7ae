use thiserror::Error;

/// Why a contraction was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContractionFailure {
    UnknownArrow(String),
    /// A directed cycle of contracted arrows would collapse to a vertex.
    CollapsesCycle(Vec<String>),
    /// The contracted arrows contain a cycle with nonzero homology.
    NontrivialHomology(Vec<String>),
    /// The contracted arrows contain an undirected cycle.
    NotAForest(Vec<String>),
    /// A face would shrink to a single arrow.
    DegenerateFace(usize),
}

impl std::fmt::Display for ContractionFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::UnknownArrow(id) => write!(f, "unknown arrow {id}"),
            Self::CollapsesCycle(ids) => {
                write!(f, "cycle {} would collapse to a vertex", ids.join(" "))
            }
            Self::NontrivialHomology(ids) => write!(
                f,
                "contracted arrows {} form a homologically nontrivial cycle",
                ids.join(" ")
            ),
            Self::NotAForest(ids) => {
                write!(f, "contracted arrows {} contain a cycle", ids.join(" "))
            }
            Self::DegenerateFace(i) => write!(f, "face {i} would become a single loop"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("arrows {0} and {1} do not compose")]
    Composition(String, String),
    #[error("labeling incomplete: arrow {0} has no label")]
    LabelingIncomplete(String),
    #[error("unsupported embedding: {0}")]
    UnsupportedEmbedding(String),
    #[error("invalid contraction: {0}")]
    InvalidContraction(ContractionFailure),
    #[error("structural error: {0}")]
    Structural(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

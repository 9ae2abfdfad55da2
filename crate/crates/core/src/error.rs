use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("malformed TSPLIB header: {0}")]
    MalformedHeader(String),

    #[error("unsupported EDGE_WEIGHT_TYPE {0:?} (supported: EUC_2D, GEO, EXPLICIT)")]
    UnsupportedEdgeWeightType(String),

    #[error("unsupported EDGE_WEIGHT_FORMAT {0:?} (supported: FULL_MATRIX, LOWER_DIAG_ROW, UPPER_ROW)")]
    UnsupportedEdgeWeightFormat(String),

    #[error("dimension mismatch: header declares {declared} nodes, data section provides {found}")]
    DimensionMismatch { declared: usize, found: usize },

    #[error("explicit cost matrix not symmetric at ({i},{j}): {a} vs {b}")]
    NonSymmetricMatrix { i: usize, j: usize, a: f64, b: f64 },

    #[error("cost matrix invalid: {0}")]
    InvalidMatrix(String),

    #[error("need at least 3 nodes, got {0}")]
    TooFewNodes(usize),

    #[error("node index {index} out of range for n={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("tour is not a permutation of 0..{n}")]
    InvalidTour { n: usize },

    #[error("tour has {tour} nodes but cost matrix has {matrix}")]
    SizeMismatch { tour: usize, matrix: usize },

    #[error("n={n} exceeds the enumeration cap {cap}; enable the override to enumerate anyway")]
    EnumerationCapExceeded { n: usize, cap: usize },

    #[error("node set for perfect matching has odd size {0}")]
    OddNodeSet(usize),

    #[error("graph has no Eulerian circuit: {0}")]
    NotEulerian(String),

    #[error("walk does not visit node {0}")]
    WalkMissingNode(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("moment combination outside the Beta-feasible (Pearson Type I) region: {0}")]
    InfeasibleMoments(String),

    #[error("degenerate tour-length distribution: {0}")]
    DegenerateDistribution(String),

    #[error("no root in bracket [{lo:e}, {hi:e}] while solving {what}")]
    NoRootInBracket { what: String, lo: f64, hi: f64 },

    #[error("{what} did not converge within {limit} iterations")]
    NonConvergence { what: String, limit: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

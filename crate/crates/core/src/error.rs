use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("line {line}: negative value {value} for node `{label}`")]
    NegativeValue { line: u64, label: String, value: f64 },

    #[error("line {line}: duplicate value row for node `{label}`")]
    DuplicateValue { line: u64, label: String },

    #[error("{} edge weight(s) outside [0, 1] after summation, first: {}", .0.len(), .0.first().map(|w| w.to_string()).unwrap_or_default())]
    InvalidWeights(Vec<WeightOffender>),

    #[error("node index {index} out of range for graph with {n} nodes")]
    NodeOutOfRange { index: usize, n: usize },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid node value {value} at index {index}: values must be finite and non-negative")]
    InvalidValue { index: usize, value: f64 },

    #[error("graph failed validation: {0}")]
    ValidationFailed(String),

    #[error("solver did not converge after {iterations} iterations (relative residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("resolvent block is singular or numerically unstable (relative residual {residual:e})")]
    Singular { residual: f64 },

    #[error("series did not converge within {terms} terms (last term norm {last_term_norm:e})")]
    SeriesNotConverged { terms: usize, last_term_norm: f64 },

    #[error("spectral condition violated: scaled spectral radius estimate {estimate} is not below 1")]
    SpectralCondition { estimate: f64 },

    #[error("power iteration did not converge after {iterations} iterations")]
    EigenNotConverged { iterations: usize },

    #[error("adjacency matrix is zero")]
    ZeroMatrix,

    #[error("adjacency matrix is acyclic (nilpotent); its only eigenvalue is 0")]
    Nilpotent,

    #[error("no nontrivial core: every strongly connected component is a single node without a self-loop")]
    NoNontrivialCore,

    #[error("unknown strongly connected component id {0}")]
    UnknownScc(usize),

    #[error("simple path enumeration exceeded {limit} paths")]
    PathLimit { limit: usize },

    #[error("influence index computation exceeded its time budget")]
    InfluenceTimeout,

    #[error("NaN score at node index {0}")]
    NanScore(usize),

    #[error("rankings are over different node universes ({0} vs {1})")]
    UniverseMismatch(usize, usize),

    #[error("reduction retained no nodes")]
    EmptyReduction,

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// An edge whose (summed) weight falls outside `[0, 1]`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct WeightOffender {
    pub source: String,
    pub target: String,
    pub weight: f64,
}

impl std::fmt::Display for WeightOffender {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} -> {} ({})", self.source, self.target, self.weight)
    }
}

pub type Result<T> = std::result::Result<T, Error>;

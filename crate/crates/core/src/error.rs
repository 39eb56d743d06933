use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the library. Messages carry the name of the component
/// that rejected the input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("data_model: degenerate labels ({0} class is empty)")]
    DegenerateLabels(&'static str),

    #[error("data_model: {0}")]
    InvalidData(String),

    #[error("{module}: cardinality k = {k} out of range for m = {m}")]
    Cardinality {
        module: &'static str,
        k: usize,
        m: usize,
    },

    #[error("{module}: dimension mismatch (expected {expected} features, found {found})")]
    DimensionMismatch {
        module: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("{module}: invalid smoothing gamma = {gamma}")]
    InvalidSmoothing { module: &'static str, gamma: f64 },

    #[error("bernoulli: non-binary summary at feature {feature} (count {count} exceeds class size {class_size})")]
    NonBinarySummary {
        feature: usize,
        count: f64,
        class_size: usize,
    },

    #[error("multinomial: {0}")]
    Multinomial(String),

    #[error("primalization: {0}")]
    Primalization(String),

    #[error("baselines: {0}")]
    Baselines(String),

    #[error("experiments: {0}")]
    Experiments(String),

    #[error("svmlight: line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("svmlight: no records")]
    NoRecords,

    #[error("model file: {0}")]
    ModelFile(String),

    #[error("model file: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn cardinality(module: &'static str, k: usize, m: usize) -> Self {
        Error::Cardinality { module, k, m }
    }

    pub(crate) fn dims(module: &'static str, expected: usize, found: usize) -> Self {
        Error::DimensionMismatch {
            module,
            expected,
            found,
        }
    }
}

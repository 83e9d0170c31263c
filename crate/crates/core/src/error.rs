use thiserror::Error;

use crate::bench::BenchError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("field length {got} does not match grid size {expected}")]
    FieldLength { expected: usize, got: usize },
    #[error("field has zero norm")]
    ZeroNorm,
    #[error("field is not normalized (norm^2 = {0})")]
    NotNormalized(f64),
    #[error("degenerate distribution")]
    DegenerateDistribution,
    #[error("invalid weight in distribution")]
    InvalidWeight,
    #[error("histogram edges must be strictly increasing")]
    HistogramEdges,
    #[error("histograms have different bin edges")]
    HistogramMismatch,
    #[error("invalid source parameters: {0}")]
    Source(String),
    #[error("grid too narrow: envelope mass outside window is {leakage:.3e}")]
    GridTooNarrow { leakage: f64 },
    #[error("invalid optical element: {0}")]
    Element(String),
    #[error("invalid pipeline: {0}")]
    Pipeline(String),
    #[error("no coincidences")]
    NoCoincidences,
    #[error("empty pattern: no accepted detections")]
    EmptyPattern,
    #[error("insufficient histogram span: need +/-{needed:.3e} m, have [{low:.3e}, {high:.3e}]")]
    InsufficientSpan { needed: f64, low: f64, high: f64 },
    #[error("toy model: {0}")]
    Toy(String),
    #[error("spdc: {0}")]
    Spdc(String),
    #[error("telegraph: {0}")]
    Telegraph(String),
    #[error(transparent)]
    Bench(#[from] BenchError),
}

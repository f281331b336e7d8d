use std::path::PathBuf;

use thiserror::Error;

/// Errors produced across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation requires dimension {required}, measure has dimension {found}")]
    DimensionError { required: usize, found: usize },

    #[error("duplicate point at indices {first} and {second}")]
    DuplicatePoint { first: usize, second: usize },

    #[error("weight at index {index} is not a positive finite number ({value})")]
    NonpositiveWeight { index: usize, value: f64 },

    #[error("non-finite coordinate at point {index}")]
    NonFiniteCoordinate { index: usize },

    #[error("{points} points but {weights} weights")]
    LengthMismatch { points: usize, weights: usize },

    #[error("invalid Cantor specification: {0}")]
    InvalidSpec(String),

    #[error("invalid range: {0}")]
    InvalidRange(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid scales: {0}")]
    InvalidScales(String),

    #[error("measure has no atoms")]
    EmptyMeasure,

    #[error("cube holds no atoms of the measure")]
    EmptyCube,

    #[error("cubes overlap")]
    OverlappingCubes,

    #[error("two of the three points coincide")]
    DegenerateTriple,

    #[error("kernel evaluated at coincident points")]
    CoincidentPoints,

    #[error("kernel {kernel} is incompatible with dimension {dim}")]
    KernelDimensionMismatch { kernel: String, dim: usize },

    #[error("invalid shell level: {0}")]
    InvalidLevel(String),

    #[error("evaluation point {0} is a breakpoint of the step function")]
    BreakpointSingularity(f64),

    #[error("f_k requires k >= 1, got {0}")]
    InvalidK(u32),

    #[error("estimated {estimated} triple evaluations exceed the budget of {budget}")]
    BudgetExceeded { estimated: u64, budget: u64 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error in {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("validation error in {path}: {source}")]
    Validation {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

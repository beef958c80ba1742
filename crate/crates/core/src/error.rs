use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{a} is not invertible modulo {q}")]
    NotCoprime { a: i64, q: i64 },

    #[error("index {index} outside the coefficient cache (n_max = {n_max})")]
    OutOfRange { index: usize, n_max: usize },

    #[error("coefficient generation to {requested} terms exceeds the budget of {budget}")]
    ResourceLimit { requested: usize, budget: usize },

    #[error("integer overflow while generating coefficient {index}")]
    Overflow { index: usize },

    #[error("quadrature did not converge on [{a}, {b}] within {panels} panels")]
    QuadratureBudget { a: f64, b: f64, panels: usize },

    #[error("no sign change of the phase derivative on [{a}, {b}]")]
    NoStationaryPoint { a: f64, b: f64 },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("argument {0} is within 1e-8 of a pole")]
    NearPole(String),

    #[error("truncation tail {tail:e} exceeds tolerance {tol:e}")]
    TailTooLarge { tail: f64, tol: f64 },

    #[error("precision {precision:e} needs {needed} coefficients, the cache holds {available}")]
    InsufficientCoefficients {
        precision: f64,
        needed: usize,
        available: usize,
    },

    #[error("i/o: {0}")]
    Io(String),

    #[error("malformed input at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

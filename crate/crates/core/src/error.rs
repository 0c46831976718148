use thiserror::Error;

/// Errors raised while building families, operators and experiments.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("constant polynomial")]
    ConstantPolynomial,

    #[error("root finder failed to converge after {iterations} iterations")]
    RootFinder { iterations: usize },

    #[error("symmetric eigensolver did not converge (iteration cap {cap})")]
    EigenNonConvergence { cap: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("seed has zero in [-1,1] (near x = {x})")]
    SeedZero { x: f64 },

    #[error("extra factor s has a zero near [-1,1] (at {x})")]
    FactorZero { x: f64 },

    #[error("seed polynomial degenerates: degree {actual} instead of {expected}")]
    DegenerateSeed { expected: usize, actual: usize },

    #[error("bw not polynomial (residual {residual:e})")]
    BwNotPolynomial { residual: f64 },

    #[error("Riccati residual not constant (spread {spread:e})")]
    RiccatiNotConstant { spread: f64 },

    #[error("weight moments diverge: {0}")]
    WeightMomentsDiverge(String),

    #[error("norm formula hypothesis violated: {0}")]
    SigmaHypothesis(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("x = {x} outside the open interval (-1, 1)")]
    Domain { x: f64 },

    #[error("evaluation point excluded: {0}")]
    Excluded(String),

    #[error("quadrature did not converge: {0}")]
    QuadratureNonConvergence(String),

    #[error("recurrence coefficient a_{n} lost positivity ({value:e})")]
    PositivityLoss { n: usize, value: f64 },

    #[error("matrix too small: need {needed} rows, have {available}")]
    SizeTooSmall { needed: usize, available: usize },

    #[error("inconsistent data: {0}")]
    Inconsistent(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("output error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

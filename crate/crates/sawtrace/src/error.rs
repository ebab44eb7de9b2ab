use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid step function: {0}")]
    InvalidStepFunction(String),

    #[error("parameter out of range: {0}")]
    Range(String),

    #[error("incompatible grids: {0}")]
    GridMismatch(String),

    #[error("quadrature did not converge within {budget} subdivisions (error estimate {estimate:e})")]
    QuadratureBudget { budget: usize, estimate: f64 },

    #[error("denominator vanishes at {at} while numerator is {numerator:e}")]
    ZeroDenominator { at: String, numerator: f64 },

    #[error("parameters are classified bounded ({0}); no witness exists")]
    ClassifiedBounded(String),

    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

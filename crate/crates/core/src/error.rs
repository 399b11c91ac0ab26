use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{func}: argument {arg} outside domain ({reason})")]
    Domain {
        func: &'static str,
        arg: f64,
        reason: &'static str,
    },

    #[error("{func}: result overflows f64 at x = {arg}")]
    Overflow { func: &'static str, arg: f64 },

    #[error("degenerate conditional gain law at sigma = {sigma}; branch on the point-mass or exponential case")]
    Degenerate { sigma: f64 },

    #[error("operation requires {expected}")]
    State { expected: &'static str },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("quadrature did not converge: estimate {estimate}, error estimate {error_estimate}")]
    Quadrature { estimate: f64, error_estimate: f64 },

    #[error("{func}: series did not converge within {terms} terms")]
    Convergence { func: &'static str, terms: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

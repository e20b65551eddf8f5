use thiserror::Error;

/// Errors raised by the cocycle library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sigma = {re}+{im}i is not inside the open unit disk (|sigma| = {modulus})")]
    SigmaOutsideDisk { re: f64, im: f64, modulus: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("first derivative must be positive, got {0}")]
    NonPositiveDerivative(f64),

    #[error("boundedness parameter lambda must lie in [0, 1), got {0}")]
    LambdaOutOfRange(f64),

    #[error("inverse evaluation did not converge (target {target}, residual {residual:e})")]
    InverseNonConvergence { target: f64, residual: f64 },

    #[error("Newton fit did not converge (best residual {0:e})")]
    FitNonConvergence(f64),

    #[error("map is not of order {order} (max deviation {deviation:e} on the check grid)")]
    NotFiniteOrder { order: i64, deviation: f64 },

    #[error("triple is degenerate (min pairwise circular distance {0:e})")]
    DegenerateTriple(f64),

    #[error("orbit of the triple lost resolution at n = {n} (relative conditioning {conditioning:e})")]
    LostResolution { n: usize, conditioning: f64 },

    #[error("{what} disagree: {lhs} vs {rhs}")]
    CrossCheck { what: &'static str, lhs: f64, rhs: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Parse(#[from] crate::maps::parse::ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

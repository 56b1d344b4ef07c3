use thiserror::Error;

/// Errors raised anywhere in the exact and numerical pipelines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero term at index {0}")]
    DivisionByZeroTerm(i64),
    #[error("invalid seed: {0}")]
    InvalidSeed(String),
    #[error("index {0} is outside the sequence window")]
    IndexOutOfWindow(i64),
    #[error("value at index {0} is not an integer")]
    NonInteger(i64),
    #[error("gauge factors must be nonzero")]
    ZeroGaugeFactor,
    #[error("zero denominator in {0}")]
    ZeroDenominator(&'static str),
    #[error("map is singular: {0}")]
    MapSingular(&'static str),
    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),
    #[error("precision loss: {0}")]
    PrecisionLoss(String),
    #[error("argument is a lattice point")]
    PoleAtLatticePoint,
    #[error("scale factor must be nonzero")]
    ZeroScale,
    #[error("seed at index {0} is zero")]
    ZeroSeed(i64),
    #[error("beta + alpha*J vanishes, fourth root mu is zero")]
    SingularMu,
    #[error("sign consistency failure: {0}")]
    ConsistencyFailure(String),
    #[error("value overflows the floating range")]
    Overflow,
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for the errors that describe a degenerate or singular problem
    /// rather than malformed input.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::DivisionByZeroTerm(_)
                | Error::ZeroDenominator(_)
                | Error::MapSingular(_)
                | Error::DegenerateCurve(_)
                | Error::PoleAtLatticePoint
                | Error::ZeroSeed(_)
                | Error::SingularMu
                | Error::ConsistencyFailure(_)
                | Error::PrecisionLoss(_)
                | Error::Overflow
                | Error::NotApplicable(_)
        )
    }
}

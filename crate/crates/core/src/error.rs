use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
///
/// The `Display` form starts with the variant name so that command-line
/// front ends can surface it verbatim (`RootOfUnity(2): ...`).
#[derive(Clone, Debug, Error, PartialEq)]
pub enum Error {
    #[error("ZeroParameter: {0} must be nonzero")]
    ZeroParameter(&'static str),
    #[error("RootOfUnity({0}): q^{0} = 1 within tolerance")]
    RootOfUnity(u32),
    #[error("InvalidTolerance: {0}")]
    InvalidTolerance(String),
    #[error("AmbiguousMatch: x matches both q^{0} and q^{1}")]
    AmbiguousMatch(i32, i32),
    #[error("InexactDivision: remainder {remainder:e} exceeds tolerance")]
    InexactDivision { remainder: f64 },
    #[error("DivisionByZero: divisor is the zero polynomial")]
    DivisionByZero,
    #[error("WindowMismatch: window [{lo}, {hi}] does not fit modulus span {span}")]
    WindowMismatch { lo: i32, hi: i32, span: i32 },
    #[error("BallViolation: image of z^{degree} leaves the degree ball")]
    BallViolation { degree: i32 },
    #[error("NonPositiveEntry: {0} has a negative or all-zero label vector")]
    NonPositiveEntry(String),
    #[error("InvalidKind: {0}")]
    InvalidKind(String),
    #[error("InconsistentRanks: leg label exceeds central label in {0}")]
    InconsistentRanks(String),
    #[error("ImaginaryKind: imaginary roots carry no stratum")]
    ImaginaryKind,
    #[error("NotOnStratum: parameters fail {0:?}")]
    NotOnStratum(Vec<String>),
    #[error("IdealNotInvariant: residual {residual:e}")]
    IdealNotInvariant { residual: f64 },
    #[error("RelationResidual: {relation} residual {residual:e}")]
    RelationResidual { relation: &'static str, residual: f64 },
    #[error("RankIndeterminate: singular value {sigma:e} within guard band of threshold {threshold:e}")]
    RankIndeterminate { sigma: f64, threshold: f64 },
    #[error("ProductNotIdentity: residual {residual:e}")]
    ProductNotIdentity { residual: f64 },
    #[error("DimensionMismatch: {0}")]
    DimensionMismatch(String),
    #[error("EigenFailure: eigenvalue iteration did not converge")]
    EigenFailure,
    #[error("Parse: {0}")]
    Parse(String),
}

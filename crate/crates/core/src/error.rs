use thiserror::Error;

/// Errors raised by the reduction, unfolding and walk machinery.
///
/// Every variant has a stable name (see [`Error::kind`]) so batch front-ends can
/// report structured failures.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("division by the zero rational function")]
    DivisionByZeroFunction,
    #[error("evaluation at a pole{}", fmt_entry(.entry))]
    EvaluationAtPole { entry: Option<(usize, usize)> },
    #[error("rational function is not proper (numerator degree {num} > denominator degree {den})")]
    NotProper { num: usize, den: usize },
    #[error("root clustering is ambiguous: roots {a} and {b} are {distance:e} apart")]
    IllConditionedRoots { a: String, b: String, distance: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular over the function field")]
    SingularOverFunctionField,
    #[error("subset is empty")]
    EmptySubset,
    #[error("unknown vertex label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate vertex label `{0}`")]
    DuplicateLabel(String),
    #[error("frame columns are not orthonormal (deviation {0:e})")]
    FrameNotOrthonormal(f64),
    #[error("subset violation: {0}")]
    SubsetViolation(String),
    #[error("not an eigenpair (residual {0:e})")]
    NotAnEigenpair(f64),
    #[error("brute-force walk enumeration too large ({estimate} walks, limit {limit})")]
    BruteForceTooLarge { estimate: f64, limit: f64 },
    #[error("complement block F is not normal (deviation {0:e})")]
    NotNormalF(f64),
    #[error("matrix Q is singular")]
    SingularQ,
    #[error("[Σ Δ] is not unitary (deviation {0:e})")]
    NotAUnitaryCompletion(f64),
    #[error("partition is not equitable: {0}")]
    NotEquitable(String),
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid block pattern: {0}")]
    InvalidPattern(String),
    #[error("divisor matrix differs from the hypercube divisor")]
    DivisorMismatch,
    #[error("no Hermitian unfolding exists: {0}")]
    NotHermitianFeasible(String),
    #[error("constant part of the reduction is not hollow (max |diag| {0:e})")]
    ConstantPartNotHollow(f64),
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("matrix is not real symmetric (deviation {0:e})")]
    NotRealSymmetric(f64),
    #[error("reductions differ at λ = {0}")]
    ReductionsDiffer(String),
    #[error("Laplace-transformed walk is singular over the function field")]
    SingularTransform,
    #[error("spectrum is not integral: {0}")]
    NonIntegralSpectrum(String),
    #[error("parse error: {0}")]
    Parse(String),
}

fn fmt_entry(entry: &Option<(usize, usize)>) -> String {
    match entry {
        Some((i, j)) => format!(" (entry {i},{j})"),
        None => String::new(),
    }
}

impl Error {
    /// Stable variant name for structured error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroDenominator => "ZeroDenominator",
            Error::DivisionByZeroFunction => "DivisionByZeroFunction",
            Error::EvaluationAtPole { .. } => "EvaluationAtPole",
            Error::NotProper { .. } => "NotProper",
            Error::IllConditionedRoots { .. } => "IllConditionedRoots",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::SingularOverFunctionField => "SingularOverFunctionField",
            Error::EmptySubset => "EmptySubset",
            Error::UnknownLabel(_) => "UnknownLabel",
            Error::DuplicateLabel(_) => "DuplicateLabel",
            Error::FrameNotOrthonormal(_) => "FrameNotOrthonormal",
            Error::SubsetViolation(_) => "SubsetViolation",
            Error::NotAnEigenpair(_) => "NotAnEigenpair",
            Error::BruteForceTooLarge { .. } => "BruteForceTooLarge",
            Error::NotNormalF(_) => "NotNormalF",
            Error::SingularQ => "SingularQ",
            Error::NotAUnitaryCompletion(_) => "NotAUnitaryCompletion",
            Error::NotEquitable(_) => "NotEquitable",
            Error::DisconnectedGraph => "DisconnectedGraph",
            Error::InvalidPartition(_) => "InvalidPartition",
            Error::InvalidPattern(_) => "InvalidPattern",
            Error::DivisorMismatch => "DivisorMismatch",
            Error::NotHermitianFeasible(_) => "NotHermitianFeasible",
            Error::ConstantPartNotHollow(_) => "ConstantPartNotHollow",
            Error::NotHermitian(_) => "NotHermitian",
            Error::NotRealSymmetric(_) => "NotRealSymmetric",
            Error::ReductionsDiffer(_) => "ReductionsDiffer",
            Error::SingularTransform => "SingularTransform",
            Error::NonIntegralSpectrum(_) => "NonIntegralSpectrum",
            Error::Parse(_) => "ParseError",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use thiserror::Error;

/// Errors raised by the library. Variants are grouped loosely by the layer
/// that produces them; callers generally match on the kind.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero input: {0}")]
    ZeroInput(&'static str),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("spectrum is not rational: {0}")]
    NonRationalSpectrum(String),
    #[error("could not decide simultaneous conjugacy (solution space of dimension {dim})")]
    IndeterminateConjugacy { dim: usize },
    #[error("duplicate singular point {point} at index {index}")]
    DuplicatePoints { index: usize, point: String },
    #[error("unknown singular point {0}")]
    UnknownPoint(String),
    #[error("system is resonant: {0}")]
    Resonant(String),
    #[error("parameter {0} is an integer")]
    IntegerParameter(String),
    #[error("subspace K+L is not invariant under B_{block}")]
    InvarianceViolation { block: usize },
    #[error("convolution identity violated: {0}")]
    IdentityViolation(String),
    #[error("precondition not met, case skipped: {0}")]
    PreconditionSkipped(String),
    #[error("{p} is a bad prime for this system")]
    BadPrime { p: u64 },
    #[error("symbol coefficient C[{p},{j}] does not vanish mod {p}")]
    SymbolResidue { p: u64, j: usize },
    #[error("system is not rigid (rigidity index {index})")]
    NotRigid { index: i64 },
    #[error("system is not absolutely irreducible")]
    NotIrreducible,
    #[error("reduction is stuck: {0}")]
    Stuck(String),
    #[error("replayed system is not isomorphic to the input")]
    ReplayMismatch,
    #[error("rank-one input: nothing to reduce")]
    RankOne,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable identifier used in machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroInput(_) => "ZeroInput",
            Error::NotSquare { .. } => "NotSquare",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::NonRationalSpectrum(_) => "NonRationalSpectrum",
            Error::IndeterminateConjugacy { .. } => "IndeterminateConjugacy",
            Error::DuplicatePoints { .. } => "DuplicatePoints",
            Error::UnknownPoint(_) => "UnknownPoint",
            Error::Resonant(_) => "Resonant",
            Error::IntegerParameter(_) => "IntegerParameter",
            Error::InvarianceViolation { .. } => "InvarianceViolation",
            Error::IdentityViolation(_) => "IdentityViolation",
            Error::PreconditionSkipped(_) => "PreconditionSkipped",
            Error::BadPrime { .. } => "BadPrime",
            Error::SymbolResidue { .. } => "SymbolResidue",
            Error::NotRigid { .. } => "NotRigid",
            Error::NotIrreducible => "NotIrreducible",
            Error::Stuck(_) => "Stuck",
            Error::ReplayMismatch => "ReplayMismatch",
            Error::RankOne => "RankOne",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

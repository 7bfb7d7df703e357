use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad failure classes, used by the command line front end to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Hypothesis,
    Solver,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("scenario error: {0}")]
    Scenario(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("domain has no inside cell")]
    EmptyDomain,
    #[error("crack {crack} crosses face {face:?} which does not separate two inside cells")]
    CrackNotInterior { crack: usize, face: crate::scenario::Face },
    #[error("dimension parameter must be positive, got {0}")]
    BadDimension(f64),
    #[error("scale cap {r_max} is not above four sampling pitches ({min})")]
    ScaleTooFine { r_max: f64, min: f64 },
    #[error("quadrature diverges under refinement for t = {t} (values {values:?})")]
    QuadratureUnderflow { t: f64, values: Vec<f64> },
    #[error("Dirichlet part is empty")]
    DEmpty,
    #[error("every cell touches the Dirichlet part, no free unknowns remain")]
    NoFreeCells,
    #[error("solver stopped after {iterations} iterations with residual {residual:e} (estimate {estimate})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        estimate: f64,
        iterate: Vec<f64>,
    },
    #[error("function is nonzero next to {} unblocked faces (norm discrepancy {discrepancy:e})", cells.len())]
    NonzeroNearE { cells: Vec<usize>, discrepancy: f64 },
    #[error("{} inside cells are not covered by the partition", cells.len())]
    CoverGap { cells: Vec<usize> },
    #[error("patch {patch} is not reflectable along axis {axis}: inside cells on a grid line are not contiguous")]
    PatchNotReflectable { patch: usize, axis: usize },
    #[error("face {0:?} is not a boundary face")]
    ENotOnBoundary(crate::scenario::Face),
    #[error("condition failed: {0}")]
    ConditionFailed(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Scenario(_)
            | Error::InvalidInput(_)
            | Error::EmptyDomain
            | Error::CrackNotInterior { .. }
            | Error::BadDimension(_)
            | Error::ScaleTooFine { .. }
            | Error::PatchNotReflectable { .. }
            | Error::ENotOnBoundary(_) => ErrorKind::Config,
            Error::DEmpty
            | Error::NoFreeCells
            | Error::NonzeroNearE { .. }
            | Error::CoverGap { .. }
            | Error::ConditionFailed(_)
            | Error::QuadratureUnderflow { .. } => ErrorKind::Hypothesis,
            Error::NoConvergence { .. } => ErrorKind::Solver,
        }
    }
}

//! Error type shared by every module.

use thiserror::Error;

/// Which hypothesis of a constructive result was not met.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Precondition {
    NotParseval,
    RangesDiffer,
    PNotProjection,
    ShiftConditionsFail,
    AnalysisNotSurjective,
    ConditionsFail,
    NotOrthogonal,
    ConstraintResidual,
    OrderMismatch,
}

impl std::fmt::Display for Precondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Precondition::NotParseval => "frame is not Parseval",
            Precondition::RangesDiffer => "ranges of the two analysis operators differ",
            Precondition::PNotProjection => "idempotent P is not an orthogonal projection",
            Precondition::ShiftConditionsFail => "shift conditions fail",
            Precondition::AnalysisNotSurjective => "analysis operator is not onto",
            Precondition::ConditionsFail => "group-like conditions fail",
            Precondition::NotOrthogonal => "frames are not orthogonal",
            Precondition::ConstraintResidual => "operator constraint residual exceeded",
            Precondition::OrderMismatch => "frame length differs from index set size",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum OvfError {
    #[error("operator is not invertible (relative smallest singular value {ratio:e})")]
    NotInvertible { ratio: f64 },
    #[error("inverse residual {residual:e} exceeds tolerance")]
    InverseResidual { residual: f64 },
    #[error("column space has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("index {index} out of range for {len} elements")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
    #[error("decompositions disagree by {residual:e}")]
    InconsistentDecomposition { residual: f64 },
    #[error("frames are not dual (residual {residual:e})")]
    NotDual { residual: f64 },
    #[error("precondition failed: {0}")]
    PreconditionFailed(Precondition),
    #[error("frames are not similar (residual {residual:e})")]
    NotSimilar { residual: f64 },
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
    #[error("invalid group-like system: {0}")]
    InvalidSystem(String),
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no perturbation hypothesis applies")]
    HypothesisFailed,
    #[error("hypothesis holds on every sample but is not certified")]
    HypothesisUncertified,
    #[error("hypothesis fails on sample {sample}")]
    HypothesisViolated { sample: usize },
    #[error("perturbation bound violated: {0}")]
    TheoremViolated(String),
}

pub type Result<T> = std::result::Result<T, OvfError>;

use thiserror::Error;

use crate::complex::Face;

/// Errors raised by complex construction, walk assembly and the analyses built on them.
#[derive(Debug, Error)]
pub enum HdxError {
    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("unknown face {0}")]
    UnknownFace(Face),

    #[error("generation failed: {0}")]
    GenerationFailed(String),

    #[error("parse error: {0}")]
    ParseError(String),

    #[error("malformed walk: {0}")]
    MalformedWalk(String),

    #[error("not a walk: entry {value:e} at ({row}, {col}) is below the negativity tolerance")]
    NotAWalk { row: usize, col: usize, value: f64 },

    #[error("walk is not self-adjoint (defect {0:e})")]
    NotSelfAdjoint(f64),

    #[error("degenerate row: restriction of face {0} has zero mass")]
    DegenerateRow(Face),

    #[error("alternating-sum construction leaves the walk polytope: entry {value:e} at ({row}, {col})")]
    ConstructionMismatch { row: usize, col: usize, value: f64 },

    #[error("decomposition degenerate: rank {rank} of {columns} stacked columns, |X(k)| = {level_size}, gamma = {gamma}")]
    DecompositionDegenerate {
        rank: usize,
        columns: usize,
        level_size: usize,
        gamma: f64,
    },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, HdxError>;

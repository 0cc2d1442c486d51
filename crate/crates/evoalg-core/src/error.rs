//! Error type shared by all modules.
//!
//! Hypothesis violations are reported as distinct variants so callers (and the
//! CLI) can name exactly which precondition failed. Indices in messages are
//! 1-based to match the usual mathematical labelling `e_1, ..., e_n`.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("structure matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("matrix does not define a natural basis change: {0}")]
    NotNatural(String),

    #[error("algebra is degenerate: e_{} squares to zero", .index + 1)]
    Degenerate { index: usize },

    #[error("algebra is non-degenerate: no basis vector squares to zero")]
    NotDegenerate,

    #[error("structure matrix is not skew-symmetric (not Volterra relative to this basis)")]
    NotVolterra,

    #[error("fourth power of e_{} is zero", .index + 1)]
    FourthPowerZero { index: usize },

    #[error("fourth power of e_{} is nonzero", .index + 1)]
    FourthPowerNonzero { index: usize },

    #[error("dim(A^2) = {got}, expected {expected}")]
    WrongSquareDimension { expected: usize, got: usize },

    #[error("e_{} lies in the annihilator class: its proportionality class is undefined", .index + 1)]
    IndexInAnnihilator { index: usize },

    #[error("natural decomposition has a single class: the pairing construction needs at least two")]
    SingleClass,

    #[error("class {{{members}}} has zero cube sum of proportionality constants; the canonical construction would change the derivation space")]
    ClassCubeSumZero { members: String },

    #[error("odd class count with non-singleton tail classes {{{a}}} and {{{b}}}: the three-block form would merge them and change the derivation space")]
    OddTailNotSingletons { a: String, b: String },

    #[error("associated graph has an odd-length directed cycle")]
    OddCycle,

    #[error("class of e_{} lies at even distance from e_{} but its cube sum is nonzero", .j + 1, .i + 1)]
    EvenDistanceCubeSumNonzero { i: usize, j: usize },

    #[error("class {{{}}} meets the descendant set of e_{} but its cube sum is nonzero", .members, .i + 1)]
    DescendantCubeSumNonzero { i: usize, members: String },

    #[error("class {{{members}}} is not mixed: it needs both a loop and a no-loop member")]
    ClassNotMixed { members: String },

    #[error("class {{{members}}} admits no pair (q, p) with alpha_qp != -(w_qq/w_qp)^2")]
    NoAdmissiblePair { members: String },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("class alignment failed: {0}")]
    AlignmentFailed(String),

    #[error("internal self-check failed: {0}")]
    Internal(String),
}

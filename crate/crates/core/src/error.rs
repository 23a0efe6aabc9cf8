use thiserror::Error;

/// Errors raised by the engine.
///
/// Input errors come from malformed Cartan data, words or indices. The
/// remaining variants signal that an identity the theory guarantees did not
/// hold, which means the engine itself is wrong.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("word is not reduced: beta_{position} = {root} is not a positive root")]
    NotReduced { position: usize, root: String },

    #[error("frame mismatch between torus elements")]
    FrameMismatch,

    #[error("exact division failed, nonzero remainder: {remainder}")]
    NotDivisible { remainder: String },

    #[error("pair is not compatible: {0}")]
    Incompatible(String),

    #[error("position {0} is frozen")]
    Frozen(usize),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("schedule error: {0}")]
    Schedule(String),

    #[error("linear algebra: {0}")]
    Linear(String),
}

pub type Result<T> = std::result::Result<T, Error>;

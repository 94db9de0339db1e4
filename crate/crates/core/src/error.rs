use thiserror::Error;

use crate::pla::ParseError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0} inputs exceed the supported maximum of 64")]
    TooManyInputs(usize),
    #[error("{0} outputs exceed the supported maximum of 128")]
    TooManyOutputs(usize),
    #[error("malformed cube pattern `{0}`")]
    BadPattern(String),
    #[error("dimension mismatch: expected {expected_inputs} inputs and {expected_outputs} outputs, got {inputs} and {outputs}")]
    DimensionMismatch {
        expected_inputs: usize,
        expected_outputs: usize,
        inputs: usize,
        outputs: usize,
    },
    #[error("cube `{0}` lies outside the cover's input/output space")]
    CubeOutOfRange(String),
    #[error("cube `{0}` asserts no output")]
    EmptyCube(String),
    #[error("cube `{0}` is already in the cover")]
    DuplicateCube(String),
    #[error("cube `{0}` is not in the cover")]
    AbsentCube(String),
    #[error("minterm table for {inputs} inputs and {outputs} outputs is too large")]
    CoverTooLarge { inputs: usize, outputs: usize },
    #[error("exhaustive evaluation supports at most 24 inputs, got {0}")]
    ExhaustiveLimit(usize),
    #[error("error rate {0} is outside [0, 1]")]
    ErrorRateOutOfRange(f64),
    #[error("solutions share erroneous input combinations {0:?}")]
    EicOverlap(Vec<u64>),
    #[error("solution ledger corrupted: {0}")]
    LedgerCorruption(String),
    #[error("external minimizer failed: {0}")]
    External(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

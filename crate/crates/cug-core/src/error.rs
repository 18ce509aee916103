use thiserror::Error;

/// Errors raised by matrix algebra, gate construction, and circuit assembly.
#[derive(Debug, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("{0}")]
    InvalidArgument(&'static str),

    #[error("shape mismatch in {op}: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    ShapeMismatch {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("entry ({row},{col}) out of bounds for a {rows}x{cols} matrix")]
    EntryOutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("duplicate entry at ({row},{col})")]
    DuplicateEntry { row: usize, col: usize },

    #[error("non-finite value at ({row},{col})")]
    NonFinite { row: usize, col: usize },

    #[error("vector length {found} does not match dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("profile must list at least one wire, each with at least 2 levels")]
    InvalidProfile,

    #[error("wire {wire} out of range for a {wires}-wire register")]
    WireOutOfRange { wire: usize, wires: usize },

    #[error("conditional state {state} out of range for {levels}-level wire {wire}")]
    InvalidConditional {
        wire: usize,
        state: usize,
        levels: usize,
    },

    #[error("duplicate conditional on wire {wire}")]
    DuplicateConditional { wire: usize },

    #[error("wire {wire} is claimed by more than one conditional or unitary block")]
    OverlappingSpan { wire: usize },

    #[error("{dim}-dimensional block at wire {start_wire} matches no consecutive wire span")]
    SpanMismatch { start_wire: usize, dim: usize },

    #[error(
        "block at wire {start_wire} is not unitary (deviation {deviation:.3e} > {tolerance:.3e})"
    )]
    NonUnitaryBlock {
        start_wire: usize,
        deviation: f64,
        tolerance: f64,
    },

    #[error("wires {a} and {b} have different level counts ({level_a} vs {level_b})")]
    LevelMismatch {
        a: usize,
        b: usize,
        level_a: usize,
        level_b: usize,
    },

    #[error("digit {digit} out of range for {levels}-level wire {wire}")]
    InvalidState {
        wire: usize,
        digit: usize,
        levels: usize,
    },

    #[error("state vector norm {norm} is not 1 within {tolerance:.1e}")]
    NotNormalized { norm: f64, tolerance: f64 },

    #[error("gate {gate} expects {expected}, got {found} parameter(s)")]
    GateArity {
        gate: &'static str,
        expected: &'static str,
        found: usize,
    },

    #[error("gate {gate} requires a level count")]
    MissingLevels { gate: &'static str },

    #[error("unknown gate name {0:?}")]
    UnknownGate(String),

    #[error("element {index}: {source}")]
    Element {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wrap an error with the index of the circuit element that caused it.
    pub fn at_element(self, index: usize) -> Error {
        Error::Element {
            index,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

//! One error type for the whole workbench.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // --- order kernel ---
    #[error("terms carry different base orders")]
    MismatchedBaseOrder,
    #[error("lex tuples have different widths ({0} vs {1})")]
    WidthMismatch(usize, usize),
    #[error("coefficient {0} out of range for chain of size {1}")]
    CoefficientOutOfRange(String, u32),
    #[error("element {0} is not in the universe of {1}")]
    ElementNotInUniverse(String, String),
    #[error("exponents not strictly decreasing at pair {0}")]
    NonDecreasingExponents(usize),
    #[error("coefficient equals the excluded bottom element of the base order")]
    BottomCoefficient,

    // --- catalog ---
    #[error("color index {got} out of range (poset has {size} elements)")]
    ColorOutOfRange { got: usize, size: usize },
    #[error("relation table is not a partial order: {0}")]
    NotAPartialOrder(String),
    #[error("unknown problem tag {0}")]
    UnknownTag(String),
    #[error("generator parameters out of range: {0}")]
    ParamsOutOfRange(String),
    #[error("certificate does not match instance: {0}")]
    CertificateMismatch(String),

    // --- reductions ---
    #[error("term length {got} exceeds the bound {bound} fixed by the first term")]
    LengthOverflow { got: u64, bound: u64 },
    #[error("instance not descending at index {0}")]
    NotDescending(u64),
    #[error("homogeneous-set color {0} is even")]
    EvenColor(u64),
    #[error("set not homogeneous: pair ({0},{1}) has color {2}, expected {3}")]
    NotHomogeneous(u64, u64, u64, u64),
    #[error("empty instance list")]
    EmptyList,
    #[error("coloring not right-ordered at ({x},{y},{y2})")]
    NotRightOrdered { x: u64, y: u64, y2: u64 },
    #[error("solution value {0} is not a unit fraction 1/(k+1)")]
    NonUnitFraction(String),
    #[error("extracted stream not increasing at position {0}")]
    NotIncreasing(u64),
    #[error("malformed solution value: {0}")]
    MalformedValue(String),
    #[error("stage budget of {0} exceeded")]
    StageBudgetExceeded(u64),

    // --- adversary / harness ---
    #[error("declared arity {got} exceeds configured maximum {max}")]
    ExponentOverflow { got: u32, max: u32 },
    #[error("unknown candidate id {0}")]
    UnknownCandidate(String),
    #[error("unknown reduction id {0}")]
    UnknownReduction(String),
    #[error("{0}")]
    Invalid(String),
}

use alloc::string::String;

use crate::plan::Level;

/// Errors raised by field arithmetic, array generation, plan combinators,
/// catalog construction and verification.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("operation requires odd characteristic, field has characteristic {0}")]
    EvenCharacteristic(u32),
    #[error("field order {0} exceeds the supported maximum of 65536")]
    FieldTooLarge(u64),
    #[error("no implemented construction yields a Hadamard matrix of order {0}")]
    UnsupportedOrder(usize),
    #[error("array with {cells} cells exceeds the size cap of {cap}")]
    SizeCapExceeded { cells: u64, cap: u64 },
    #[error("array already carries a zero column")]
    AlreadyAugmented,
    #[error("invalid array: {0}")]
    InvalidArray(String),
    #[error("invalid plan: {0}")]
    InvalidPlan(String),
    #[error("level {level} of factor {factor} is outside its shift group")]
    LevelOutOfRange { factor: usize, level: Level },
    #[error("shift {shift} is not valid for factor {factor}")]
    ShiftOutOfRange { factor: usize, shift: u32 },
    #[error("expected dimension {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("level {level} of factor {factor} has no image under the map")]
    UnmappedLevel { factor: usize, level: Level },
    #[error("index {index} out of range for {len} factors")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("column {column} sums to {sum}, expected block size {expected}")]
    ColumnSumMismatch { column: usize, sum: i64, expected: i64 },
    #[error("level {level} of factor {factor} is never replicated")]
    DegenerateModel { factor: usize, level: Level },
    #[error("{recipe}: constraint violated: {constraint}")]
    ConstraintViolation { recipe: String, constraint: String },
    #[error("unknown recipe id {0:?}")]
    UnknownRecipe(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = core::result::Result<T, Error>;

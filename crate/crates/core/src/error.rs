use std::fmt;

use thiserror::Error;

use crate::field::FieldSpec;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("division by zero")]
    DivisionByZero,
    #[error("modulus {0} is not a prime")]
    NotPrime(u64),
    #[error("modulus {0} is out of range (must be below 2^32)")]
    ModulusOutOfRange(u64),
    #[error("empty family")]
    EmptyFamily,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("series is zero up to its precision and has no known order")]
    NoKnownOrder,
    #[error("series has infinitely many terms; only finitely supported series can be translated")]
    NotFinite,
    #[error("cannot translate by zero: negative exponents present")]
    PoleAtOrigin,
    #[error("operation requires characteristic zero, field is {0}")]
    PositiveCharacteristic(FieldSpec),
    #[error("no translation point avoiding every pole found among the first {0} candidates")]
    NoTranslationPoint(usize),
    #[error("variable index {index} out of range for {vars} variables")]
    VariableOutOfRange { index: usize, vars: usize },
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A syntax or evaluation error in textual input, located by 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

pub type Result<T, E = Error> = std::result::Result<T, E>;

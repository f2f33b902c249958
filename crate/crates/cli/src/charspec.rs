//! `q:index` character addresses.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharSpecError {
    #[error("expected q:index, got {0:?}")]
    Shape(String),
    #[error("not a decimal integer: {0:?}")]
    Number(String),
    #[error("modulus must be at least 1")]
    ZeroModulus,
}

fn decimal(s: &str) -> Result<u64, CharSpecError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(CharSpecError::Number(s.to_string()));
    }
    s.parse().map_err(|_| CharSpecError::Number(s.to_string()))
}

/// Parses `q:index` into (q, index). Whether the index exists for q is left
/// to the character constructor.
pub fn parse_char_spec(s: &str) -> Result<(u64, u64), CharSpecError> {
    let (q, idx) = s.split_once(':').ok_or_else(|| CharSpecError::Shape(s.to_string()))?;
    let q = decimal(q)?;
    let idx = decimal(idx)?;
    if q == 0 {
        return Err(CharSpecError::ZeroModulus);
    }
    Ok((q, idx))
}

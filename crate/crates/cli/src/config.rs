//! Plain-text run configuration: one `key = value` per line, `#` comments,
//! keys named after the long flags they pre-set.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigEntry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected key = value")]
    MissingSeparator { line: usize },
    #[error("line {line}: empty key")]
    EmptyKey { line: usize },
    #[error("line {line}: invalid key {key:?}")]
    BadKey { line: usize, key: String },
    #[error("line {line}: empty value for {key}")]
    EmptyValue { line: usize, key: String },
    #[error("line {line}: {key} set twice")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: control character in value")]
    ControlCharacter { line: usize },
}

/// Keys may be written as `chi-index`, `chi_index` or `--chi-index`; they come
/// back in the flag spelling `chi-index`.
pub fn normalize_key(raw: &str) -> String {
    raw.trim_start_matches("--").replace('_', "-")
}

fn valid_key(key: &str) -> bool {
    let mut chars = key.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '-')
}

pub fn parse_config(text: &str) -> Result<Vec<ConfigEntry>, ConfigError> {
    let mut out: Vec<ConfigEntry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (k, v) = trimmed.split_once('=').ok_or(ConfigError::MissingSeparator { line })?;
        let k = k.trim();
        if k.is_empty() {
            return Err(ConfigError::EmptyKey { line });
        }
        let key = normalize_key(k);
        if !valid_key(&key) {
            return Err(ConfigError::BadKey { line, key: k.to_string() });
        }
        let value = v.trim();
        if value.is_empty() {
            return Err(ConfigError::EmptyValue { line, key });
        }
        if value.chars().any(char::is_control) {
            return Err(ConfigError::ControlCharacter { line });
        }
        if out.iter().any(|e| e.key == key) {
            return Err(ConfigError::DuplicateKey { line, key });
        }
        out.push(ConfigEntry { key, value: value.to_string(), line });
    }
    Ok(out)
}

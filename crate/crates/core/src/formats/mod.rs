//! Text formats shared by the CLI and the simulator: code files (JSON),
//! LLR and bit vectors (plain text) and reliability profiles (CSV).

mod bits;
mod code_file;
mod llr;
mod profile_csv;

pub use bits::{parse_bits, write_bits};
pub use code_file::{CodeFile, ConstructionInfo};
pub use llr::{parse_llrs, write_llrs};
pub use profile_csv::{parse_profile_csv, write_profile_csv};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {msg}")]
    Json { path: String, msg: String },
    #[error("{field}: {msg}")]
    Invalid { field: String, msg: String },
    #[error("line {line}: {msg}")]
    Token { line: usize, msg: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Code(#[from] crate::Error),
}

impl FormatError {
    pub(crate) fn invalid(field: impl Into<String>, msg: impl Into<String>) -> Self {
        Self::Invalid {
            field: field.into(),
            msg: msg.into(),
        }
    }
}

/// Splits text into `(line, token)` pairs on whitespace and commas, skipping
/// blank lines and `#` comments.
fn tokens(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().flat_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("");
        line.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(move |t| (i + 1, t))
    })
}

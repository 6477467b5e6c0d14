use super::{tokens, FormatError};

/// Reads natural-log LLRs, one per line (commas and extra whitespace are
/// also accepted as separators). Non-finite values are rejected.
pub fn parse_llrs(text: &str) -> Result<Vec<f64>, FormatError> {
    tokens(text)
        .map(|(line, t)| {
            let v: f64 = t.parse().map_err(|_| FormatError::Token {
                line,
                msg: format!("`{t}` is not a number"),
            })?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(FormatError::Token {
                    line,
                    msg: format!("`{t}` is not finite"),
                })
            }
        })
        .collect()
}

/// One value per line, printed with enough digits to round-trip.
pub fn write_llrs(llrs: &[f64]) -> String {
    let mut out = String::with_capacity(llrs.len() * 20);
    for v in llrs {
        out.push_str(&format!("{v:?}\n"));
    }
    out
}

use super::{tokens, FormatError};

/// Reads a bit vector. Tokens are runs of `0`/`1` characters; each
/// character is one bit, so `0110`, `0 1 1 0` and `0,1,1,0` are equivalent.
pub fn parse_bits(text: &str) -> Result<Vec<u8>, FormatError> {
    let mut out = Vec::new();
    for (line, t) in tokens(text) {
        for c in t.chars() {
            match c {
                '0' => out.push(0),
                '1' => out.push(1),
                _ => {
                    return Err(FormatError::Token {
                        line,
                        msg: format!("`{c}` is not a bit"),
                    })
                }
            }
        }
    }
    Ok(out)
}

/// Bits as one line of `0`/`1` characters.
pub fn write_bits(bits: &[u8]) -> String {
    let mut s: String = bits.iter().map(|&b| if b & 1 == 1 { '1' } else { '0' }).collect();
    s.push('\n');
    s
}

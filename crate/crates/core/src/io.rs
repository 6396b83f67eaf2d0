//! Newline-delimited hexadecimal element words.

use thiserror::Error;

use crate::ffield::{Elem, FIELD_SIZE};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ElementParseError {
    #[error("line {line}: {text:?} is not a hexadecimal word")]
    NotHex { line: usize, text: String },
    #[error("line {line}: {value:#x} is not a 12-bit word")]
    OutOfRange { line: usize, value: u32 },
}

/// One `0x...` word per line, in the given order.
pub fn format_elements(set: &[Elem]) -> String {
    set.iter().map(|x| format!("{x:#05x}\n")).collect()
}

/// Accepts words with or without `0x`; blank lines and `#` comments are
/// skipped.
pub fn parse_elements(text: &str) -> Result<Vec<Elem>, ElementParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let digits = line
            .strip_prefix("0x")
            .or_else(|| line.strip_prefix("0X"))
            .unwrap_or(line);
        let value = u32::from_str_radix(digits, 16).map_err(|_| ElementParseError::NotHex {
            line: i + 1,
            text: line.to_string(),
        })?;
        if value as usize >= FIELD_SIZE {
            return Err(ElementParseError::OutOfRange { line: i + 1, value });
        }
        out.push(value as Elem);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let set = vec![0, 0x1, 0xabc, 0xfff];
        let text = format_elements(&set);
        assert_eq!(text.lines().next(), Some("0x000"));
        assert_eq!(parse_elements(&text), Ok(set));
        assert_eq!(parse_elements("# c\n\n 1f \n0X2"), Ok(vec![0x1f, 2]));
        assert!(matches!(parse_elements("zz"), Err(ElementParseError::NotHex { line: 1, .. })));
        assert!(matches!(
            parse_elements("1000"),
            Err(ElementParseError::OutOfRange { value: 0x1000, .. })
        ));
    }
}

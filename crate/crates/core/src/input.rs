//! Textual encodings of an input `x ∈ {0,1}^n`.
//!
//! - `0b0110`: bit string, character `i` is coordinate `i`
//! - `0x0f`: hex bytes, bits little-endian within each byte
//! - `1,4,7` or `[1, 4, 7]`: indices of the set coordinates (`[]` for zero)

use crate::error::{Error, Result};
use crate::gf2::BitVector;

pub fn parse_input(s: &str, n: usize) -> Result<BitVector> {
    let s = s.trim();
    if let Some(bits) = s.strip_prefix("0b") {
        let v = BitVector::from_bit_string(bits)?;
        if v.len() != n {
            return Err(Error::Parse(format!("bit string has {} bits, expected n = {n}", v.len())));
        }
        return Ok(v);
    }
    if let Some(hex) = s.strip_prefix("0x") {
        return BitVector::from_hex(n, hex);
    }
    let body = s.strip_prefix('[').and_then(|b| b.strip_suffix(']')).unwrap_or(s);
    let mut idx = Vec::new();
    for tok in body.split(|c: char| c == ',' || c.is_whitespace()) {
        if tok.is_empty() {
            continue;
        }
        let i: usize = tok
            .parse()
            .map_err(|e| Error::Parse(format!("bad index {tok:?}: {e}")))?;
        if i >= n {
            return Err(Error::Parse(format!("index {i} out of range for n = {n}")));
        }
        idx.push(i);
    }
    BitVector::from_indices(n, &idx)
}

/// Canonical `0b` form.
pub fn format_input(x: &BitVector) -> String {
    format!("0b{}", x.to_bit_string())
}

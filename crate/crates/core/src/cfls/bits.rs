use std::fmt;

use crate::error::{Error, Result};

/// A fixed-length binary string; `Ord` is lexicographic with `0 < 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        BitString(bits)
    }

    /// The `width`-bit big-endian representation of `value`.
    ///
    /// Widths beyond 128 bits are padded with leading zeros.
    pub fn from_index(value: u128, width: usize) -> Result<Self> {
        if width < 128 && value >> width != 0 {
            return Err(Error::domain(format!("{value} does not fit in {width} bits")));
        }
        Ok(BitString(
            (0..width)
                .rev()
                .map(|i| i < 128 && (value >> i) & 1 == 1)
                .collect(),
        ))
    }

    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::domain(format!("invalid bit {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    /// Bytes packed most significant bit first, zero padded on the right.
    pub fn packed(&self) -> Vec<u8> {
        self.0
            .chunks(8)
            .map(|chunk| {
                chunk
                    .iter()
                    .enumerate()
                    .fold(0u8, |acc, (i, &b)| acc | ((b as u8) << (7 - i)))
            })
            .collect()
    }

    pub fn from_packed(bytes: &[u8], len: usize) -> Result<Self> {
        if bytes.len() != len.div_ceil(8) {
            return Err(Error::parse("bit string payload has wrong length"));
        }
        Ok(BitString(
            (0..len).map(|i| (bytes[i / 8] >> (7 - i % 8)) & 1 == 1).collect(),
        ))
    }
}

impl From<&[bool]> for BitString {
    fn from(bits: &[bool]) -> Self {
        BitString(bits.to_vec())
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_endian_index() {
        assert_eq!(BitString::from_index(5, 4).unwrap().to_string(), "0101");
        assert_eq!(BitString::from_index(0, 3).unwrap().to_string(), "000");
        assert!(BitString::from_index(16, 4).is_err());
        let wide = BitString::from_index(3, 130).unwrap();
        assert_eq!(wide.len(), 130);
        assert!(wide.bits()[128] && wide.bits()[129]);
    }

    #[test]
    fn order_is_lexicographic() {
        let a = BitString::parse("0110").unwrap();
        let b = BitString::parse("1001").unwrap();
        assert!(a < b);
        for i in 0..15u128 {
            assert!(BitString::from_index(i, 4).unwrap() < BitString::from_index(i + 1, 4).unwrap());
        }
    }

    #[test]
    fn packing_round_trip() {
        for s in ["", "1", "0101", "101100111", "1111111100000000"] {
            let b = BitString::parse(s).unwrap();
            assert_eq!(BitString::from_packed(&b.packed(), b.len()).unwrap(), b);
        }
    }
}

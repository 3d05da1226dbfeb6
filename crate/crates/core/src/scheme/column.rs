use std::fmt;
use std::ops::BitXor;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

/// A fixed-width column of bits, most significant first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitColumn {
    bits: Vec<bool>,
}

impl BitColumn {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn zeros(k: usize) -> Self {
        Self {
            bits: vec![false; k],
        }
    }

    pub fn ones(k: usize) -> Self {
        Self {
            bits: vec![true; k],
        }
    }

    pub fn random<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Self {
        Self {
            bits: (0..k).map(|_| rng.gen()).collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn xor(&self, other: &Self) -> Result<Self> {
        if self.width() != other.width() {
            return Err(Error::WidthMismatch {
                expected: self.width(),
                got: other.width(),
            });
        }
        Ok(Self {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a ^ b)
                .collect(),
        })
    }

    /// Parses a hex string; each digit contributes four bits.
    pub fn from_hex(text: &str) -> Result<Self> {
        let text = text.trim();
        let text = text.strip_prefix("0x").unwrap_or(text);
        if text.is_empty() {
            return Err(Error::invalid("empty hex string"));
        }
        let mut bits = Vec::with_capacity(4 * text.len());
        for c in text.chars() {
            let d = c
                .to_digit(16)
                .ok_or_else(|| Error::invalid(format!("`{c}` is not a hex digit")))?;
            bits.extend((0..4).rev().map(|s| (d >> s) & 1 == 1));
        }
        Ok(Self { bits })
    }

    /// Hex rendering, left-padded with zero bits to a whole number of digits.
    pub fn to_hex(&self) -> String {
        let pad = (4 - self.width() % 4) % 4;
        let padded: Vec<bool> = std::iter::repeat_n(false, pad)
            .chain(self.bits.iter().copied())
            .collect();
        padded
            .chunks(4)
            .map(|nib| {
                let d = nib.iter().fold(0u32, |acc, &b| acc << 1 | b as u32);
                char::from_digit(d, 16).unwrap()
            })
            .collect()
    }

    /// Packs the bits into bytes, left-padded like [`BitColumn::to_hex`].
    pub fn to_bytes(&self) -> Vec<u8> {
        let pad = (8 - self.width() % 8) % 8;
        let padded: Vec<bool> = std::iter::repeat_n(false, pad)
            .chain(self.bits.iter().copied())
            .collect();
        padded
            .chunks(8)
            .map(|b| b.iter().fold(0u8, |acc, &x| acc << 1 | x as u8))
            .collect()
    }
}

impl BitXor for &BitColumn {
    type Output = BitColumn;

    /// Panics on a width mismatch; use [`BitColumn::xor`] for a checked version.
    fn bitxor(self, rhs: Self) -> BitColumn {
        self.xor(rhs).expect("bit columns of equal width")
    }
}

impl fmt::Display for BitColumn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitColumn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitColumn({self})")
    }
}

impl FromStr for BitColumn {
    type Err = Error;

    /// Parses a string of `0`/`1` characters.
    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::invalid(format!("`{c}` is not a bit"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }
}

/// Big-endian binary expansion of `y`, exactly `k` bits wide.
pub fn int_to_column(y: u64, k: usize) -> Result<BitColumn> {
    if k < 64 && y >> k != 0 {
        return Err(Error::invalid(format!("{y} does not fit in {k} bits")));
    }
    Ok(BitColumn {
        bits: (0..k).rev().map(|i| i < 64 && (y >> i) & 1 == 1).collect(),
    })
}

pub fn column_to_int(c: &BitColumn) -> Result<u64> {
    let lead = c.width().saturating_sub(64);
    if c.bits[..lead].iter().any(|&b| b) {
        return Err(Error::invalid("column value does not fit in 64 bits"));
    }
    Ok(c.bits[lead..]
        .iter()
        .fold(0u64, |acc, &b| acc << 1 | b as u64))
}

//! Unique words and their overlap (autocorrelation) structure.
//!
//! A unique word `k = k_1 k_2 … k_L` is stored MSB-first. Public accessors
//! take 0-based positions; the 1-based convention of the overlap function
//! (`r_k(i)` compares the suffix starting at `k_{i+1}` with the prefix of
//! length `L - i`) is confined to [`UniqueWord::overlap`].

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest word length accepted by [`count_overlap_vectors`].
pub const MAX_BRUTE_FORCE_LEN: usize = 24;

/// A binary separator pattern.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UniqueWord {
    bits: Box<[u8]>,
}

impl UniqueWord {
    /// Builds a word from 0/1 digits.
    pub fn new(bits: &[u8]) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidUw("unique word must not be empty".into()));
        }
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidUw(format!("bit value {b} is not 0 or 1")));
        }
        Ok(Self { bits: bits.into() })
    }

    /// Builds a length-`len` word from the low `len` bits of `value`, MSB first.
    pub fn from_value(value: u64, len: usize) -> Result<Self> {
        if len == 0 || len > 64 {
            return Err(Error::InvalidUw(format!("length {len} out of range 1..=64")));
        }
        let bits: Vec<u8> = (0..len)
            .map(|i| ((value >> (len - 1 - i)) & 1) as u8)
            .collect();
        Self::new(&bits)
    }

    /// `0…0` of the given length.
    pub fn all_zero(len: usize) -> Result<Self> {
        Self::new(&vec![0; len])
    }

    /// `0…01` of the given length.
    pub fn zeros_then_one(len: usize) -> Result<Self> {
        let mut bits = vec![0; len];
        if let Some(last) = bits.last_mut() {
            *last = 1;
        }
        Self::new(&bits)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Bit at 0-based position `pos`.
    pub fn bit(&self, pos: usize) -> u8 {
        self.bits[pos]
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// Integer value of the word, MSB first. Only meaningful for `L <= 64`.
    pub fn value(&self) -> u64 {
        self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b))
    }

    /// Overlap function `r_k(i)`: 1 iff `0 <= i < L` and the suffix starting
    /// after the first `i` bits equals the prefix of length `L - i`.
    pub fn overlap(&self, i: i64) -> bool {
        let len = self.len() as i64;
        if i < 0 || i >= len {
            return false;
        }
        let i = i as usize;
        self.bits[i..] == self.bits[..self.len() - i]
    }

    pub fn overlap_vector(&self) -> OverlapVector {
        OverlapVector {
            entries: (0..self.len() as i64).map(|i| self.overlap(i)).collect(),
        }
    }

    /// `k_L … k_1`.
    pub fn reverse(&self) -> Self {
        let mut bits = self.bits.to_vec();
        bits.reverse();
        Self { bits: bits.into() }
    }

    /// Bitwise complement.
    pub fn complement(&self) -> Self {
        Self {
            bits: self.bits.iter().map(|b| 1 - b).collect(),
        }
    }

    /// Smallest word of the orbit `{k, rev k, comp k, rev comp k}`.
    pub fn canonical_class_representative(&self) -> Self {
        let rev = self.reverse();
        let comp = self.complement();
        let rev_comp = comp.reverse();
        [self.clone(), rev, comp, rev_comp]
            .into_iter()
            .min()
            .expect("orbit is non-empty")
    }

    /// True for `0^L` and `1^L`.
    pub fn is_constant(&self) -> bool {
        self.bits.iter().all(|&b| b == self.bits[0])
    }
}

impl fmt::Display for UniqueWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in self.bits.iter() {
            f.write_str(if b == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for UniqueWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniqueWord({self})")
    }
}

impl FromStr for UniqueWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = crate::bits::parse_bits(s)
            .map_err(|_| Error::InvalidUw(format!("{s:?} is not a 0/1 string")))?;
        Self::new(&bits)
    }
}

/// The length-`L` vector `(r_k(0), …, r_k(L-1))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OverlapVector {
    entries: Vec<bool>,
}

impl OverlapVector {
    pub fn entries(&self) -> &[bool] {
        &self.entries
    }

    /// `r_k(i)` with out-of-range `i` mapped to 0.
    pub fn get(&self, i: usize) -> bool {
        self.entries.get(i).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Number of distinct overlap vectors among all `2^L` words of length `L`,
/// by exhaustive enumeration.
pub fn count_overlap_vectors(len: usize) -> Result<u64> {
    if len == 0 || len > MAX_BRUTE_FORCE_LEN {
        return Err(Error::SizeCap {
            what: "overlap vector enumeration",
            got: len,
            max: MAX_BRUTE_FORCE_LEN,
        });
    }
    // Complementing a word leaves its overlap vector unchanged, so words
    // with a leading 0 cover every vector.
    let mut seen: HashSet<u32> = HashSet::new();
    for word in 0u64..(1u64 << (len - 1)) {
        let mut vector = 0u32;
        for i in 0..len {
            let suffix = word & ((1u64 << (len - i)) - 1);
            let prefix = word >> i;
            if suffix == prefix {
                vector |= 1 << i;
            }
        }
        seen.insert(vector);
    }
    Ok(seen.len() as u64)
}

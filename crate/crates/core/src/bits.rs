//! Bit strings as `0`/`1` byte slices and MSB-first octet packing.

/// Parses a string of `0`/`1` characters. Returns the offending character
/// on failure.
pub fn parse_bits(s: &str) -> Result<Vec<u8>, char> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(other),
        })
        .collect()
}

pub fn format_bits(bits: &[u8]) -> String {
    bits.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}

/// MSB-first bit writer; the final octet is zero-padded.
#[derive(Default)]
pub struct BitWriter {
    buf: Vec<u8>,
    bit_len: usize,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn push(&mut self, bit: u8) {
        if self.bit_len % 8 == 0 {
            self.buf.push(0);
        }
        if bit != 0 {
            let last = self.buf.last_mut().expect("octet allocated above");
            *last |= 0x80 >> (self.bit_len % 8);
        }
        self.bit_len += 1;
    }

    pub fn extend(&mut self, bits: &[u8]) {
        for &b in bits {
            self.push(b);
        }
    }

    pub fn bit_len(&self) -> usize {
        self.bit_len
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf
    }
}

/// Unpacks the first `bit_len` bits of `bytes`, MSB first.
pub fn unpack(bytes: &[u8], bit_len: usize) -> Option<Vec<u8>> {
    if bit_len > bytes.len() * 8 {
        return None;
    }
    Some(
        (0..bit_len)
            .map(|i| (bytes[i / 8] >> (7 - i % 8)) & 1)
            .collect(),
    )
}

pub fn pack(bits: &[u8]) -> Vec<u8> {
    let mut w = BitWriter::new();
    w.extend(bits);
    w.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn msb_first_layout() {
        assert_eq!(pack(&[1, 0, 1]), vec![0b1010_0000]);
        assert_eq!(pack(&[0, 0, 0, 0, 0, 0, 0, 1, 1]), vec![0x01, 0x80]);
        assert!(pack(&[]).is_empty());
        assert_eq!(parse_bits("0110"), Ok(vec![0, 1, 1, 0]));
        assert_eq!(parse_bits("01x"), Err('x'));
    }

    proptest! {
        #[test]
        fn pack_unpack_roundtrip(bits in proptest::collection::vec(0u8..2, 0..200)) {
            let bytes = pack(&bits);
            prop_assert_eq!(bytes.len(), bits.len().div_ceil(8));
            prop_assert_eq!(unpack(&bytes, bits.len()).unwrap(), bits);
        }
    }
}

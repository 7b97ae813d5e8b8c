//! UW-framed bit streams and the `.udo` container.
//!
//! Payload layout: `k · c1 · k · c2 · k · … · cN · k`. An empty message list
//! is a lone `k`; `message_count` in the header tells the two apart from a
//! single null message (`k · k`).
//!
//! Container, all integers big-endian:
//!
//! ```text
//! "UDO1" | uw_len u8 | uw bits (packed) | message_count u64
//!        | payload_bit_count u64 | payload (packed)
//!        [ | entry_count u32 | t u8 | symbol_count u64 | entry_count * t octets ]
//! ```
//!
//! The trailing dictionary section is optional and carries the ranked block
//! alphabet needed to turn indices back into text.

use num_bigint::BigUint;
use rayon::prelude::*;

use super::EncoderContext;
use crate::bits::{pack, unpack};
use crate::error::{Error, Result};
use crate::uw::UniqueWord;

pub const MAGIC: &[u8; 4] = b"UDO1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StreamHeader {
    pub uw: UniqueWord,
    pub message_count: u64,
    pub payload_bit_count: u64,
}

/// A framed payload, one bit per byte.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FramedStream {
    pub header: StreamHeader,
    pub payload: Vec<u8>,
}

/// Ranked block alphabet: entry `i` is the block with index `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dictionary {
    pub t: u8,
    /// Number of symbols before tail padding, so decompression can trim it.
    pub symbol_count: u64,
    pub entries: Vec<Vec<u8>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Container {
    pub stream: FramedStream,
    pub dictionary: Option<Dictionary>,
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| Error::Container(format!("truncated {what}")))?;
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u8(&mut self, what: &str) -> Result<u8> {
        Ok(self.take(1, what)?[0])
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_be_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn u64(&mut self, what: &str) -> Result<u64> {
        Ok(u64::from_be_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    fn is_done(&self) -> bool {
        self.pos == self.bytes.len()
    }
}

fn octets_for(bits: u64) -> Result<usize> {
    usize::try_from(bits.div_ceil(8)).map_err(|_| Error::Container("bit count too large".into()))
}

impl FramedStream {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(22 + self.payload.len() / 8);
        out.extend_from_slice(MAGIC);
        out.push(self.header.uw.len() as u8);
        out.extend(pack(self.header.uw.bits()));
        out.extend(self.header.message_count.to_be_bytes());
        out.extend(self.header.payload_bit_count.to_be_bytes());
        out.extend(pack(&self.payload));
        out
    }

    fn read(r: &mut Reader<'_>) -> Result<Self> {
        if r.take(4, "magic")? != MAGIC {
            return Err(Error::Container("bad magic".into()));
        }
        let uw_len = r.u8("uw length")? as usize;
        if uw_len < 2 {
            return Err(Error::UwTooShort(uw_len));
        }
        let uw_bytes = r.take(uw_len.div_ceil(8), "uw bits")?;
        let uw = UniqueWord::new(&unpack(uw_bytes, uw_len).expect("sized above"))?;
        let message_count = r.u64("message count")?;
        let payload_bit_count = r.u64("payload bit count")?;
        let payload_bytes = r.take(octets_for(payload_bit_count)?, "payload")?;
        let payload = unpack(payload_bytes, payload_bit_count as usize).expect("sized above");
        Ok(Self {
            header: StreamHeader {
                uw,
                message_count,
                payload_bit_count,
            },
            payload,
        })
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        let stream = Self::read(&mut r)?;
        if !r.is_done() {
            return Err(Error::Container("trailing bytes after payload".into()));
        }
        Ok(stream)
    }
}

impl Container {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.stream.to_bytes();
        if let Some(d) = &self.dictionary {
            out.extend((d.entries.len() as u32).to_be_bytes());
            out.push(d.t);
            out.extend(d.symbol_count.to_be_bytes());
            for e in &d.entries {
                out.extend_from_slice(e);
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        let stream = FramedStream::read(&mut r)?;
        let dictionary = if r.is_done() {
            None
        } else {
            let count = r.u32("dictionary size")? as usize;
            let t = r.u8("block length")?;
            if t == 0 {
                return Err(Error::Container("block length 0".into()));
            }
            let symbol_count = r.u64("symbol count")?;
            let total = count
                .checked_mul(t as usize)
                .ok_or_else(|| Error::Container("dictionary too large".into()))?;
            let body = r.take(total, "dictionary entries")?;
            if !r.is_done() {
                return Err(Error::Container("trailing bytes after dictionary".into()));
            }
            Some(Dictionary {
                t,
                symbol_count,
                entries: body.chunks(t as usize).map(<[u8]>::to_vec).collect(),
            })
        };
        Ok(Self { stream, dictionary })
    }
}

/// Frames the codewords of `indices` between copies of the UW.
pub fn encode_stream(ctx: &EncoderContext, indices: &[BigUint]) -> Result<FramedStream> {
    let uw = ctx.uw().bits();
    let mut payload = Vec::new();
    payload.extend_from_slice(uw);
    for m in indices {
        payload.extend(ctx.encode_index(m)?);
        payload.extend_from_slice(uw);
    }
    Ok(FramedStream {
        header: StreamHeader {
            uw: ctx.uw().clone(),
            message_count: indices.len() as u64,
            payload_bit_count: payload.len() as u64,
        },
        payload,
    })
}

/// Splits a framed payload at the UW occurrences and returns the codewords
/// between them.
///
/// The scan is greedy: after a separator at `p` the next one is searched
/// from `p + L`. Definition-level validity means no occurrence can start
/// inside a codeword or straddle its boundaries.
pub fn split_payload<'a>(uw: &UniqueWord, payload: &'a [u8]) -> Result<Vec<&'a [u8]>> {
    let k = uw.bits();
    let len = k.len();
    if payload.len() < len || &payload[..len] != k {
        return Err(Error::Framing("payload does not start with the unique word".into()));
    }
    if &payload[payload.len() - len..] != k {
        return Err(Error::Framing("payload does not end with the unique word".into()));
    }
    let mut out = Vec::new();
    let mut start = len;
    while start < payload.len() {
        let next = payload[start..]
            .windows(len)
            .position(|w| w == k)
            .map(|p| p + start)
            .ok_or_else(|| Error::Framing(format!("no unique word after bit {start}")))?;
        out.push(&payload[start..next]);
        start = next + len;
    }
    if start != payload.len() {
        return Err(Error::Framing("trailing bits after the last unique word".into()));
    }
    Ok(out)
}

pub fn decode_stream(ctx: &EncoderContext, stream: &FramedStream) -> Result<Vec<BigUint>> {
    decode_stream_with(ctx, stream, 1)
}

/// Decodes a stream, using up to `jobs` threads for the per-codeword work.
pub fn decode_stream_with(
    ctx: &EncoderContext,
    stream: &FramedStream,
    jobs: usize,
) -> Result<Vec<BigUint>> {
    if &stream.header.uw != ctx.uw() {
        return Err(Error::Framing(format!(
            "stream uses unique word {}, context has {}",
            stream.header.uw,
            ctx.uw()
        )));
    }
    if stream.header.payload_bit_count != stream.payload.len() as u64 {
        return Err(Error::Framing("payload bit count mismatch".into()));
    }
    let pieces = split_payload(ctx.uw(), &stream.payload)?;
    if pieces.len() as u64 != stream.header.message_count {
        return Err(Error::Framing(format!(
            "found {} messages, header says {}",
            pieces.len(),
            stream.header.message_count
        )));
    }
    if jobs <= 1 {
        return pieces.iter().map(|c| ctx.decode_codeword(c)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Framing(format!("thread pool: {e}")))?;
    pool.install(|| pieces.par_iter().map(|c| ctx.decode_codeword(c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::{format_bits, parse_bits};

    fn ctx(s: &str) -> EncoderContext {
        EncoderContext::new(&s.parse().unwrap()).unwrap()
    }

    fn idx(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn example_stream_for_00() {
        let ctx = ctx("00");
        let s = encode_stream(&ctx, &idx(&[2, 3, 4, 8])).unwrap();
        assert_eq!(format_bits(&s.payload), "00100110010100111100");
        assert_eq!(s.header.payload_bit_count, 20);
        assert_eq!(decode_stream(&ctx, &s).unwrap(), idx(&[2, 3, 4, 8]));
    }

    #[test]
    fn empty_and_null_streams() {
        let ctx = ctx("00");
        let empty = encode_stream(&ctx, &[]).unwrap();
        assert_eq!(format_bits(&empty.payload), "00");
        assert!(decode_stream(&ctx, &empty).unwrap().is_empty());
        let null = encode_stream(&ctx, &idx(&[1])).unwrap();
        assert_eq!(format_bits(&null.payload), "0000");
        assert_eq!(decode_stream(&ctx, &null).unwrap(), idx(&[1]));
        let nulls = encode_stream(&ctx, &idx(&[1, 1, 1])).unwrap();
        assert_eq!(decode_stream(&ctx, &nulls).unwrap(), idx(&[1, 1, 1]));
    }

    #[test]
    fn framing_errors() {
        let ctx = ctx("00");
        let mut s = encode_stream(&ctx, &idx(&[2, 3])).unwrap();
        s.header.message_count = 3;
        assert!(matches!(decode_stream(&ctx, &s), Err(Error::Framing(_))));
        let bad = FramedStream {
            header: StreamHeader {
                uw: "00".parse().unwrap(),
                message_count: 1,
                payload_bit_count: 4,
            },
            payload: parse_bits("1100").unwrap(),
        };
        assert!(matches!(decode_stream(&ctx, &bad), Err(Error::Framing(_))));
    }

    #[test]
    fn container_roundtrip_is_bit_exact() {
        let ctx = ctx("0001");
        let s = encode_stream(&ctx, &idx(&[5, 1, 77, 3])).unwrap();
        let bytes = s.to_bytes();
        assert_eq!(&bytes[..4], MAGIC);
        assert_eq!(bytes[4], 4);
        assert_eq!(bytes[5], 0b0001_0000);
        assert_eq!(&bytes[6..14], &4u64.to_be_bytes());
        assert_eq!(&bytes[14..22], &s.header.payload_bit_count.to_be_bytes());
        assert_eq!(bytes.len(), 22 + (s.payload.len()).div_ceil(8));
        assert_eq!(FramedStream::from_bytes(&bytes).unwrap(), s);

        let c = Container {
            stream: s,
            dictionary: Some(Dictionary {
                t: 2,
                symbol_count: 7,
                entries: vec![b"ab".to_vec(), b"c ".to_vec()],
            }),
        };
        let bytes = c.to_bytes();
        assert_eq!(Container::from_bytes(&bytes).unwrap(), c);
        assert!(Container::from_bytes(&bytes[..bytes.len() - 1]).is_err());
        assert!(FramedStream::from_bytes(b"UDO2").is_err());
    }

    #[test]
    fn parallel_matches_sequential() {
        let ctx = ctx("010");
        let ids: Vec<BigUint> = (1..500u64).map(|i| BigUint::from(i * i * 7919 % 100_003 + 1)).collect();
        let s = encode_stream(&ctx, &ids).unwrap();
        assert_eq!(decode_stream_with(&ctx, &s, 4).unwrap(), ids);
        assert_eq!(decode_stream(&ctx, &s).unwrap(), ids);
    }
}

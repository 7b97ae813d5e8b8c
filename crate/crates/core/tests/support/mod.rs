//! Brute-force oracles straight from the definitions, independent of the
//! digraph and recursion machinery.

#![allow(dead_code)]

use std::path::PathBuf;

use udooc::UniqueWord;

/// Bits of `v` as an `n`-bit word, MSB first.
pub fn word(v: u64, n: usize) -> Vec<u8> {
    (0..n).map(|i| ((v >> (n - 1 - i)) & 1) as u8).collect()
}

/// True iff `pattern` occurs in `text` at some position other than the
/// first or the last possible one.
pub fn occurs_internally(pattern: &[u8], text: &[u8]) -> bool {
    let m = pattern.len();
    if text.len() < m {
        return false;
    }
    let last = text.len() - m;
    (1..last).any(|p| &text[p..p + m] == pattern)
}

/// Separator legality: `k` is not an internal subword of `k·b·k`. The null
/// word is a codeword for every `k` (two adjacent UWs frame it).
pub fn is_codeword(k: &UniqueWord, b: &[u8]) -> bool {
    if b.is_empty() {
        return true;
    }
    let mut s = k.bits().to_vec();
    s.extend_from_slice(b);
    s.extend_from_slice(k.bits());
    !occurs_internally(k.bits(), &s)
}

/// All length-`n` codewords in increasing binary order.
pub fn codewords(k: &UniqueWord, n: usize) -> Vec<Vec<u8>> {
    (0..1u64 << n)
        .map(|v| word(v, n))
        .filter(|b| is_codeword(k, b))
        .collect()
}

pub fn count_c(k: &UniqueWord, n: usize) -> u64 {
    (0..1u64 << n).filter(|&v| is_codeword(k, &word(v, n))).count() as u64
}

/// Length-`n` strings avoiding `k` anywhere.
pub fn count_s(k: &UniqueWord, n: usize) -> u64 {
    let kb = k.bits();
    (0..1u64 << n)
        .filter(|&v| {
            let w = word(v, n);
            !w.windows(kb.len()).any(|x| x == kb)
        })
        .count() as u64
}

pub fn all_uws(len: usize) -> Vec<UniqueWord> {
    (0..1u64 << len)
        .map(|v| UniqueWord::from_value(v, len).unwrap())
        .collect()
}

pub fn uw(s: &str) -> UniqueWord {
    s.parse().unwrap()
}

/// Location of the Alice corpus: `$UDOOC_ALICE`, else `data/alice.txt`
/// next to this crate's manifest.
pub fn alice_path() -> Option<PathBuf> {
    if let Some(p) = std::env::var_os("UDOOC_ALICE") {
        let p = PathBuf::from(p);
        return p.is_file().then_some(p);
    }
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/alice.txt");
    p.is_file().then_some(p)
}

pub fn alice_stream() -> Option<Vec<u8>> {
    alice_path().map(|p| udooc::source::normalize_text(&std::fs::read(p).unwrap()))
}

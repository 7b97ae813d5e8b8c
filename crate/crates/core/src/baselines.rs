//! Reference coders: Huffman code lengths and a plain LZ78 parse.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::source::SourceModel;

/// Optimal binary code lengths for `probs` (any order), by the two-queue
/// construction. Ties prefer the leaf queue, then lower index.
pub fn huffman_lengths(probs: &[f64]) -> Result<Vec<u32>> {
    let n = probs.len();
    if n < 2 {
        return Err(Error::Model(format!("Huffman code needs at least 2 symbols, got {n}")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| probs[a].total_cmp(&probs[b]).then(a.cmp(&b)));

    // Nodes 0..n are leaves (in `order`), n.. are internal.
    let mut weight: Vec<f64> = order.iter().map(|&i| probs[i]).collect();
    let mut parent = vec![usize::MAX; 2 * n - 1];
    let (mut leaf, mut merged) = (0usize, n);
    let pick = |weight: &Vec<f64>, leaf: &mut usize, merged: &mut usize| {
        let next = weight.len();
        if *leaf < n && (*merged >= next || weight[*leaf] <= weight[*merged]) {
            *leaf += 1;
            *leaf - 1
        } else {
            *merged += 1;
            *merged - 1
        }
    };
    for _ in 0..n - 1 {
        let a = pick(&weight, &mut leaf, &mut merged);
        let b = pick(&weight, &mut leaf, &mut merged);
        let id = weight.len();
        weight.push(weight[a] + weight[b]);
        parent[a] = id;
        parent[b] = id;
    }
    let mut depth = vec![0u32; 2 * n - 1];
    for v in (0..2 * n - 2).rev() {
        depth[v] = depth[parent[v]] + 1;
    }
    let mut out = vec![0u32; n];
    for (pos, &i) in order.iter().enumerate() {
        out[i] = depth[pos];
    }
    Ok(out)
}

/// Huffman average length in bits per symbol of `model`.
pub fn huffman_average_length(model: &SourceModel) -> Result<f64> {
    let lengths = huffman_lengths(model.probs())?;
    Ok(model
        .probs()
        .iter()
        .zip(&lengths)
        .map(|(p, &l)| p * f64::from(l))
        .sum())
}

/// Bits for an index into a dictionary of `size` entries.
fn index_width(size: usize) -> u64 {
    if size <= 1 {
        0
    } else {
        u64::from(usize::BITS - (size - 1).leading_zeros())
    }
}

/// LZ78 parse of `stream` into phrases `(prefix phrase, new symbol)`.
/// Returns the phrase count, including a trailing phrase that is already
/// in the dictionary.
pub fn lz78_phrase_count<T: Copy + Eq + std::hash::Hash>(stream: &[T]) -> usize {
    let mut dict: HashMap<(usize, T), usize> = HashMap::new();
    let mut node = 0usize;
    for &s in stream {
        match dict.get(&(node, s)) {
            Some(&next) => node = next,
            None => {
                dict.insert((node, s), dict.len() + 1);
                node = 0;
            }
        }
    }
    dict.len() + usize::from(node != 0)
}

/// LZ78 size with every phrase written as a fixed-width index into the
/// final dictionary (the empty root plus all phrases) followed by a
/// `symbol_bits`-bit literal.
pub fn lz78_bits<T: Copy + Eq + std::hash::Hash>(stream: &[T], symbol_bits: u64) -> u64 {
    let phrases = lz78_phrase_count(stream) as u64;
    phrases * (index_width(phrases as usize + 1) + symbol_bits)
}

/// LZ78 on the binary ASCII expansion of `stream` (8 bits per octet, MSB
/// first) with 1-bit literals.
pub fn lz78_compressed_bits(stream: &[u8]) -> u64 {
    let bits: Vec<u8> = stream
        .iter()
        .flat_map(|&b| (0..8).rev().map(move |i| (b >> i) & 1))
        .collect();
    lz78_bits(&bits, 1)
}

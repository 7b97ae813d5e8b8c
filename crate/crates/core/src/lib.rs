//! Uniquely decodable one-to-one codes (UDOOCs).
//!
//! A UDOOC pairs a one-to-one code with a fixed binary unique word `k`: a
//! bit string `b` is a codeword when `k` never occurs strictly inside
//! `k·b·k`, so a stream `k·c1·k·c2·k…` splits unambiguously at the
//! occurrences of `k`.
//!
//! The crate provides
//! - [`uw`]: unique words and overlap vectors,
//! - [`digraph`]: the forbidding digraph `G_k` and its adjacency structure,
//! - [`enumeration`]: exact codeword counts, `h_k(z)` and growth rates,
//! - [`codec`]: lexicographic enumerative encoding/decoding and UW framing,
//! - [`source`]: text normalization, empirical and product source models,
//! - [`bounds`]: analytic upper bounds on the average codeword length,
//! - [`baselines`]: Huffman and LZ78 reference coders,
//! - [`report`]: the tabulated experiments exposed by the CLI.

pub mod baselines;
pub mod bits;
pub mod bounds;
pub mod cli;
pub mod codec;
pub mod digraph;
pub mod enumeration;
mod error;
pub mod report;
pub mod source;
pub mod uw;

pub use codec::{EncoderContext, FastPath, FramedStream};
pub use digraph::{AdjacencySet, Digraph};
pub use enumeration::{CountTable, GrowthRate, HPolynomial};
pub use error::{Error, Result};
pub use source::SourceModel;
pub use uw::{OverlapVector, UniqueWord};

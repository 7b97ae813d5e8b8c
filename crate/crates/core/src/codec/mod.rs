//! Lexicographic enumerative encoding of message indices.
//!
//! Index `m >= 1` maps to the `m`-th codeword in length-first,
//! then lexicographic order: index 1 is the null codeword, indices
//! `F_{k,n-1}+1 ..= F_{k,n}` are the length-`n` codewords in increasing
//! binary order. The encoder walks the codeword bit by bit, choosing 0
//! whenever the residual rank `ρ` fits among the codewords extending the
//! current prefix with a 0.
//!
//! Prefix counts come from one of three sources:
//! - constant UWs (`0^L`, `1^L`) read them straight off `c_{k,n}`,
//! - `1^{L-1}0` and `0^{L-1}1` do the same after a one-step legality check,
//! - every other UW uses per-vertex tail counts on `G_k`.

mod fsm;
mod stream;

use std::sync::RwLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::bits::format_bits;
use crate::digraph::AdjacencySet;
use crate::enumeration::{count_codewords, lccde_next};
use crate::error::{Error, Result};
use crate::uw::{OverlapVector, UniqueWord};

pub use fsm::{counting_states, StateMachine, TailTable, Transition};
pub use stream::{
    decode_stream, decode_stream_with, encode_stream, split_payload, Container, Dictionary,
    FramedStream, StreamHeader, MAGIC,
};

/// Tail tables are kept only up to this many vertices (`L <= 17`); larger
/// UWs run the state machine per bit instead.
const TAIL_MEMO_MAX_ORDER: usize = 1 << 16;

/// Longest codeword the context will produce. Past this the tables (and for
/// linear-growth UWs, the index itself) stop being practical.
pub const MAX_CODEWORD_LEN: usize = 1 << 16;

/// Which specialised prefix-count rule applies to a UW.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FastPath {
    /// `0^L` or `1^L`.
    AllSame,
    /// `1^{L-1}0` or `0^{L-1}1`.
    NearAllSame,
    General,
}

impl FastPath {
    pub fn classify(uw: &UniqueWord) -> Self {
        let len = uw.len();
        if uw.is_constant() {
            FastPath::AllSame
        } else if uw.bits()[..len - 1].iter().all(|&b| b == uw.bit(0)) {
            FastPath::NearAllSame
        } else {
            FastPath::General
        }
    }
}

/// Progressive metric and live vertex before each encoding step. The state
/// machine's value vector is the indicator of `vertex` at every step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProgressiveState {
    pub rho: BigUint,
    pub vertex: u32,
}

#[derive(Debug)]
struct Tables {
    c: Vec<BigUint>,
    f: Vec<BigUint>,
    tails: Option<TailTable>,
}

/// Precomputed state for encoding and decoding with one UW.
///
/// The count horizon and tail memo grow on demand behind a lock; all
/// methods take `&self` and may be called concurrently.
#[derive(Debug)]
pub struct EncoderContext {
    uw: UniqueWord,
    adj: AdjacencySet,
    overlap: OverlapVector,
    fast_path: FastPath,
    counting: Vec<bool>,
    tables: RwLock<Tables>,
}

impl EncoderContext {
    pub fn new(uw: &UniqueWord) -> Result<Self> {
        let adj = AdjacencySet::new(uw)?;
        let counting = counting_states(&adj);
        // Past `L` terms the recursion no longer reads the overridden `c_0`,
        // so `extend_counts` can continue from this table.
        let c = count_codewords(uw, (2 * uw.len()).max(16))?;
        let f = crate::enumeration::cumulative(&c);
        let tails = (adj.order() <= TAIL_MEMO_MAX_ORDER).then(|| TailTable::new(&counting));
        Ok(Self {
            uw: uw.clone(),
            overlap: uw.overlap_vector(),
            fast_path: FastPath::classify(uw),
            adj,
            counting,
            tables: RwLock::new(Tables { c, f, tails }),
        })
    }

    pub fn uw(&self) -> &UniqueWord {
        &self.uw
    }

    pub fn adjacency(&self) -> &AdjacencySet {
        &self.adj
    }

    pub fn fast_path(&self) -> FastPath {
        self.fast_path
    }

    /// True for `01` and `10`, whose codebooks grow only linearly.
    pub fn is_linear_growth(&self) -> bool {
        self.uw.len() == 2 && self.uw.bit(0) != self.uw.bit(1)
    }

    pub fn counting_states(&self) -> &[bool] {
        &self.counting
    }

    fn extend_counts(tables: &mut Tables, overlap: &OverlapVector, n: usize) {
        while tables.c.len() <= n {
            let next = lccde_next(overlap, &tables.c);
            let total = tables.f.last().expect("non-empty") + &next;
            tables.c.push(next);
            tables.f.push(total);
        }
    }

    fn ensure_horizon(&self, n: usize) {
        if self.tables.read().unwrap().c.len() > n {
            return;
        }
        let mut t = self.tables.write().unwrap();
        Self::extend_counts(&mut t, &self.overlap, n);
    }

    fn ensure_tails(&self, r_max: usize) {
        {
            let t = self.tables.read().unwrap();
            match &t.tails {
                Some(tails) if tails.horizon() < r_max => {}
                _ => return,
            }
        }
        let mut t = self.tables.write().unwrap();
        if let Some(tails) = t.tails.as_mut() {
            tails.extend_to(&self.adj, r_max);
        }
    }

    /// `c_{k,n}`.
    pub fn c(&self, n: usize) -> BigUint {
        self.ensure_horizon(n);
        self.tables.read().unwrap().c[n].clone()
    }

    /// `F_{k,n}`, zero for negative `n`.
    pub fn f(&self, n: i64) -> BigUint {
        if n < 0 {
            return BigUint::zero();
        }
        self.ensure_horizon(n as usize);
        self.tables.read().unwrap().f[n as usize].clone()
    }

    /// `F_{k,0..=n}` as floats (saturating), for the analytic bounds.
    pub fn f_table_f64(&self, n: usize) -> Vec<f64> {
        self.ensure_horizon(n);
        let t = self.tables.read().unwrap();
        t.f[..=n]
            .iter()
            .map(|x| x.to_f64().unwrap_or(f64::INFINITY))
            .collect()
    }

    /// Smallest `n` with `F_{k,n} >= m`: the codeword length of index `m`.
    pub fn length_of_index(&self, m: &BigUint) -> Result<usize> {
        if m.is_zero() {
            return Err(Error::ZeroIndex);
        }
        loop {
            {
                let t = self.tables.read().unwrap();
                if t.f.last().expect("non-empty") >= m {
                    return Ok(t.f.partition_point(|x| x < m));
                }
            }
            let mut t = self.tables.write().unwrap();
            if t.c.len() > MAX_CODEWORD_LEN {
                return Err(Error::SizeCap {
                    what: "codeword length",
                    got: t.c.len(),
                    max: MAX_CODEWORD_LEN,
                });
            }
            let target = (t.c.len() * 2).min(MAX_CODEWORD_LEN + 1);
            Self::extend_counts(&mut t, &self.overlap, target);
        }
    }

    /// `|C_k(d, n)|` by running the counting state machine: start at `x_k`,
    /// apply `Ξ_{k,d_t}` for each prefix bit, then `Ξ_k` for the remaining
    /// `n - ℓ(d)` positions and sum the counting states.
    pub fn prefix_count(&self, d: &[u8], n: usize) -> Result<BigUint> {
        if d.len() > n {
            return Err(Error::PrefixTooLong {
                prefix: d.len(),
                n,
            });
        }
        let mut fsm = StateMachine::at_start(&self.adj);
        for &b in d {
            fsm.apply(Transition::Bit(b));
        }
        for _ in d.len()..n {
            fsm.apply(Transition::Any);
        }
        Ok(fsm.counting_sum(&self.counting))
    }

    /// Codewords of length `n` extending the live vertex `v` with `r` more
    /// free bits: `e_v^T A^r w`.
    fn tail_count(&self, v: u32, r: usize) -> BigUint {
        {
            let t = self.tables.read().unwrap();
            if let Some(tails) = &t.tails {
                if tails.horizon() >= r {
                    return tails.get(r, v).clone();
                }
            } else {
                drop(t);
                let mut fsm = StateMachine::at_vertex(&self.adj, v);
                for _ in 0..r {
                    fsm.apply(Transition::Any);
                }
                return fsm.counting_sum(&self.counting);
            }
        }
        self.ensure_tails(r);
        self.tables.read().unwrap().tails.as_ref().unwrap().get(r, v).clone()
    }

    /// Encodes index `m` (1-based) into its codeword.
    pub fn encode_index(&self, m: &BigUint) -> Result<Vec<u8>> {
        match self.fast_path {
            FastPath::General => self.encode_general(m).map(|(c, _)| c),
            _ => self.encode_fast(m),
        }
    }

    /// Like [`encode_index`](Self::encode_index) but always on the general
    /// path, returning the progressive state before each bit.
    pub fn encode_index_traced(&self, m: &BigUint) -> Result<(Vec<u8>, Vec<ProgressiveState>)> {
        self.encode_general(m)
    }

    /// General-path encoding regardless of the UW shape.
    pub fn encode_index_general(&self, m: &BigUint) -> Result<Vec<u8>> {
        self.encode_general(m).map(|(c, _)| c)
    }

    /// Decodes a codeword into its 1-based index.
    pub fn decode_codeword(&self, codeword: &[u8]) -> Result<BigUint> {
        match self.fast_path {
            FastPath::General => self.decode_general(codeword),
            _ => self.decode_fast(codeword),
        }
    }

    pub fn decode_codeword_general(&self, codeword: &[u8]) -> Result<BigUint> {
        self.decode_general(codeword)
    }

    fn start_rank(&self, m: &BigUint) -> Result<(usize, BigUint)> {
        let n = self.length_of_index(m)?;
        let rho = m - self.f(n as i64 - 1);
        Ok((n, rho))
    }

    fn invalid(&self, codeword: &[u8]) -> Error {
        Error::InvalidCodeword {
            uw: self.uw.to_string(),
            codeword: format_bits(codeword),
        }
    }

    fn encode_general(&self, m: &BigUint) -> Result<(Vec<u8>, Vec<ProgressiveState>)> {
        let (n, mut rho) = self.start_rank(m)?;
        let graph = self.adj.graph();
        let mut v = self.adj.x();
        let mut out = Vec::with_capacity(n);
        let mut trace = Vec::with_capacity(n);
        for i in 1..=n {
            trace.push(ProgressiveState {
                rho: rho.clone(),
                vertex: v,
            });
            let zero_next = graph.step(v, 0);
            let dummy = zero_next.map_or_else(BigUint::zero, |s| self.tail_count(s, n - i));
            if rho <= dummy {
                out.push(0);
                v = zero_next.expect("dummy > 0 implies a live 0-edge");
            } else {
                out.push(1);
                rho -= dummy;
                v = graph
                    .step(v, 1)
                    .expect("rank within prefix count implies a live 1-edge");
            }
        }
        debug_assert!(rho.is_one() || n == 0);
        Ok((out, trace))
    }

    fn decode_general(&self, codeword: &[u8]) -> Result<BigUint> {
        if codeword.is_empty() {
            return Ok(BigUint::one());
        }
        let n = codeword.len();
        let graph = self.adj.graph();
        let mut m = self.f(n as i64 - 1) + 1u32;
        let mut v = self.adj.x();
        for (i, &bit) in codeword.iter().enumerate() {
            if bit == 1 {
                if let Some(s) = graph.step(v, 0) {
                    m += self.tail_count(s, n - i - 1);
                }
            }
            v = graph.step(v, bit).ok_or_else(|| self.invalid(codeword))?;
        }
        if !self.counting[v as usize] {
            return Err(self.invalid(codeword));
        }
        Ok(m)
    }

    /// Whether the UW starts with 0; such UWs are handled as the
    /// complement of the 1-leading shape with a running prefix total.
    fn inverted(&self) -> bool {
        self.uw.bit(0) == 0
    }

    /// Count of length-`n` codewords extending prefix `d·b`, where `b` is
    /// the bit that is *not* the UW's leading bit, `ℓ(d) = prefix_len` and
    /// `v` is the live vertex after `d`.
    fn fast_branch_count(&self, v: u32, bit: u8, prefix_len: usize, n: usize, c: &[BigUint]) -> BigUint {
        match self.fast_path {
            // 1^L: |C(d0, n)| = c_{n-ℓ(d)}
            FastPath::AllSame => c[n - prefix_len].clone(),
            // 1^{L-1}0: |C(d0, n)| = c_{n-ℓ(d)-1} when d0 does not complete k
            FastPath::NearAllSame => {
                if self.adj.graph().step(v, bit).is_some() {
                    c[n - prefix_len - 1].clone()
                } else {
                    BigUint::zero()
                }
            }
            FastPath::General => unreachable!("fast path only"),
        }
    }

    fn encode_fast(&self, m: &BigUint) -> Result<Vec<u8>> {
        let (n, mut rho) = self.start_rank(m)?;
        let t = self.tables.read().unwrap();
        let c = &t.c;
        let graph = self.adj.graph();
        let inverted = self.inverted();
        // The branch with a closed-form count is the one taking bit `free`.
        let free = if inverted { 1 } else { 0 };
        let mut total = c[n].clone();
        let mut v = self.adj.x();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let free_count = self.fast_branch_count(v, free, i, n, c);
            let zero_count = if inverted {
                &total - &free_count
            } else {
                free_count.clone()
            };
            let bit = if rho <= zero_count {
                if inverted {
                    total = zero_count;
                }
                0
            } else {
                rho -= &zero_count;
                if inverted {
                    total = free_count;
                }
                1
            };
            out.push(bit);
            v = graph.step(v, bit).expect("encoder stays on live prefixes");
        }
        Ok(out)
    }

    fn decode_fast(&self, codeword: &[u8]) -> Result<BigUint> {
        if codeword.is_empty() {
            return Ok(BigUint::one());
        }
        let n = codeword.len();
        self.ensure_horizon(n);
        let graph = self.adj.graph();
        let mut v = self.adj.x();
        for &bit in codeword {
            v = graph.step(v, bit).ok_or_else(|| self.invalid(codeword))?;
        }
        if !self.counting[v as usize] {
            return Err(self.invalid(codeword));
        }
        let mut m = self.f(n as i64 - 1) + 1u32;
        let t = self.tables.read().unwrap();
        let c = &t.c;
        let inverted = self.inverted();
        let free = if inverted { 1 } else { 0 };
        let mut total = c[n].clone();
        let mut v = self.adj.x();
        for (i, &bit) in codeword.iter().enumerate() {
            let free_count = self.fast_branch_count(v, free, i, n, c);
            let zero_count = if inverted {
                &total - &free_count
            } else {
                free_count.clone()
            };
            if bit == 1 {
                m += &zero_count;
                if inverted {
                    total = free_count;
                }
            } else if inverted {
                total = zero_count;
            }
            v = graph.step(v, bit).expect("validated above");
        }
        Ok(m)
    }

    /// Definition-level check: `k` is not an internal subword of `k·c·k`.
    /// The null codeword is always accepted.
    pub fn is_codeword(&self, codeword: &[u8]) -> bool {
        if codeword.is_empty() {
            return true;
        }
        let graph = self.adj.graph();
        codeword
            .iter()
            .try_fold(self.adj.x(), |v, &b| graph.step(v, b))
            .is_some_and(|v| self.counting[v as usize])
    }
}

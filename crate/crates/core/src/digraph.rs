//! The UW-forbidding digraph `G_k`.
//!
//! Vertices are the `2^(L-1)` binary words of length `L-1`, encoded as
//! integers with the leftmost bit most significant. An edge `i -> j` exists
//! when `j` is `i` shifted left by one bit with a new bit `b` appended, unless
//! the length-`L` window `i·b` equals the unique word. Every vertex therefore
//! has the two de Bruijn successors except the vertex `k_1^{L-1}`, which
//! loses the one completing `k`.
//!
//! Edges are never materialized: successor and predecessor lists are
//! computed from the vertex integer in O(1).

use std::collections::VecDeque;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::uw::UniqueWord;

/// Largest UW length for matrix-backed operations.
pub const MAX_GRAPH_UW_LEN: usize = 24;

#[derive(Clone, Debug)]
pub struct Digraph {
    uw: UniqueWord,
    /// `k` as an `L`-bit integer.
    forbidden: u32,
    /// `L - 1`.
    width: u32,
}

/// An outgoing or incoming edge, labelled with the bit shifted in at its
/// destination.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: u32,
    pub to: u32,
    pub bit: u8,
}

impl Digraph {
    pub fn build(uw: &UniqueWord) -> Result<Self> {
        let len = uw.len();
        if len < 2 {
            return Err(Error::UwTooShort(len));
        }
        if len > MAX_GRAPH_UW_LEN {
            return Err(Error::SizeCap {
                what: "digraph order",
                got: len,
                max: MAX_GRAPH_UW_LEN,
            });
        }
        Ok(Self {
            uw: uw.clone(),
            forbidden: uw.value() as u32,
            width: (len - 1) as u32,
        })
    }

    pub fn uw(&self) -> &UniqueWord {
        &self.uw
    }

    pub fn uw_len(&self) -> usize {
        self.width as usize + 1
    }

    pub fn vertex_count(&self) -> usize {
        1usize << self.width
    }

    #[inline]
    fn mask(&self) -> u32 {
        (1u32 << self.width) - 1
    }

    /// Destination reached from `v` by shifting in `bit`, or `None` when the
    /// window `v·bit` is the unique word.
    #[inline]
    pub fn step(&self, v: u32, bit: u8) -> Option<u32> {
        let window = (v << 1) | u32::from(bit);
        if window == self.forbidden {
            None
        } else {
            Some(window & self.mask())
        }
    }

    pub fn successors(&self, v: u32) -> impl Iterator<Item = Edge> + '_ {
        (0..2u8).filter_map(move |bit| {
            self.step(v, bit).map(|to| Edge { from: v, to, bit })
        })
    }

    /// In-edges of `v`; both carry the bit `v & 1`.
    pub fn predecessors(&self, v: u32) -> impl Iterator<Item = Edge> + '_ {
        let bit = (v & 1) as u8;
        let top = if self.width == 0 { 0 } else { 1u32 << (self.width - 1) };
        let base = v >> 1;
        let candidates: &[u32] = if self.width == 0 { &[0] } else { &[0, 1] };
        candidates.iter().filter_map(move |&hi| {
            let from = base | if hi == 1 { top } else { 0 };
            let window = (from << 1) | u32::from(bit);
            (window != self.forbidden).then_some(Edge { from, to: v, bit })
        })
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.vertex_count() as u32).flat_map(move |v| self.successors(v))
    }

    /// Vertex `k_2^L`, where every codeword walk starts.
    pub fn start_vertex(&self) -> u32 {
        self.forbidden & self.mask()
    }

    /// Vertex `k_1^{L-1}`, where every codeword walk ends.
    pub fn end_vertex(&self) -> u32 {
        self.forbidden >> 1
    }

    /// Reachability in both directions from vertex 0. Besides `01` and `10`
    /// this fails for `0^{L-1}1`, `1^{L-1}0`, `10^{L-1}` and `01^{L-1}`,
    /// where the constant vertex is a one-loop sink or source.
    pub fn is_strongly_connected(&self) -> bool {
        let n = self.vertex_count();
        let reach = |forward: bool| {
            let mut seen = vec![false; n];
            let mut queue = VecDeque::from([0u32]);
            seen[0] = true;
            let mut count = 1;
            while let Some(v) = queue.pop_front() {
                let next: Vec<u32> = if forward {
                    self.successors(v).map(|e| e.to).collect()
                } else {
                    self.predecessors(v).map(|e| e.from).collect()
                };
                for w in next {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        count += 1;
                        queue.push_back(w);
                    }
                }
            }
            count == n
        };
        reach(true) && reach(false)
    }

    /// Vertex label as an `L-1` bit string.
    pub fn vertex_label(&self, v: u32) -> String {
        (0..self.width)
            .rev()
            .map(|i| if (v >> i) & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Graphviz rendering; 0-edges dashed, 1-edges solid.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        writeln!(out, "digraph \"G_{}\" {{", self.uw).unwrap();
        for v in 0..self.vertex_count() as u32 {
            let mut attrs = Vec::new();
            if v == self.start_vertex() {
                attrs.push("shape=doublecircle");
            }
            if v == self.end_vertex() {
                attrs.push("style=bold");
            }
            writeln!(
                out,
                "  \"{}\" [{}];",
                self.vertex_label(v),
                attrs.join(",")
            )
            .unwrap();
        }
        for e in self.edges() {
            let style = if e.bit == 0 { "dashed" } else { "solid" };
            writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}\",style={}];",
                self.vertex_label(e.from),
                self.vertex_label(e.to),
                e.bit,
                style
            )
            .unwrap();
        }
        out.push_str("}\n");
        out
    }
}

/// The adjacency structure `A_k = A_{k,0} + A_{k,1}` with the boundary
/// vectors `x_k` (start at `k_2^L`) and `y_k` (end at `k_1^{L-1}`).
///
/// Matrices are views over the implicit edge set of [`Digraph`]; each row
/// holds at most two ones.
#[derive(Clone, Debug)]
pub struct AdjacencySet {
    graph: Digraph,
}

impl AdjacencySet {
    pub fn new(uw: &UniqueWord) -> Result<Self> {
        Ok(Self {
            graph: Digraph::build(uw)?,
        })
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn order(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Entry `(i, j)` of `A_k`.
    pub fn a(&self, i: u32, j: u32) -> u8 {
        self.graph.successors(i).filter(|e| e.to == j).count() as u8
    }

    /// Entry `(i, j)` of `A_{k,bit}`: edges whose destination ends in `bit`.
    pub fn a_bit(&self, bit: u8, i: u32, j: u32) -> u8 {
        self.graph
            .successors(i)
            .filter(|e| e.to == j && e.bit == bit)
            .count() as u8
    }

    /// Index of the single one in `x_k`.
    pub fn x(&self) -> u32 {
        self.graph.start_vertex()
    }

    /// Index of the single one in `y_k`.
    pub fn y(&self) -> u32 {
        self.graph.end_vertex()
    }

    /// Dense copy of `A_k` (or `A_{k,bit}`), for small orders only.
    pub fn dense(&self, bit: Option<u8>) -> Vec<Vec<u8>> {
        let n = self.order();
        let mut m = vec![vec![0u8; n]; n];
        for e in self.graph.edges() {
            if bit.is_none_or(|b| b == e.bit) {
                m[e.from as usize][e.to as usize] += 1;
            }
        }
        m
    }

    /// One application of `v^T -> v^T A` (restricted to `bit`-edges when
    /// given) on a row vector indexed by vertex.
    pub fn step_row(&self, v: &[BigUint], bit: Option<u8>) -> Vec<BigUint> {
        let mut out = vec![BigUint::zero(); v.len()];
        for (to, slot) in out.iter_mut().enumerate() {
            let to = to as u32;
            if bit.is_some_and(|b| u32::from(b) != to & 1) {
                continue;
            }
            for e in self.graph.predecessors(to) {
                let val = &v[e.from as usize];
                if !val.is_zero() {
                    *slot += val;
                }
            }
        }
        out
    }

    /// `x^T A^steps y`: walks of length `steps` from the start vertex to the
    /// end vertex.
    pub fn walk_count(&self, steps: usize) -> BigUint {
        self.walk_counts(steps).pop().expect("at least one entry")
    }

    /// `x^T A^s y` for `s = 0..=max_steps`.
    pub fn walk_counts(&self, max_steps: usize) -> Vec<BigUint> {
        let mut v = vec![BigUint::zero(); self.order()];
        v[self.x() as usize] = BigUint::one();
        let y = self.y() as usize;
        let mut out = Vec::with_capacity(max_steps + 1);
        out.push(v[y].clone());
        for _ in 0..max_steps {
            v = self.step_row(&v, None);
            out.push(v[y].clone());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uw(s: &str) -> UniqueWord {
        s.parse().unwrap()
    }

    fn edge_labels(g: &Digraph) -> Vec<(String, String)> {
        let mut v: Vec<_> = g
            .edges()
            .map(|e| (g.vertex_label(e.from), g.vertex_label(e.to)))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn edges_of_010() {
        let g = Digraph::build(&uw("010")).unwrap();
        let expected: Vec<(String, String)> = [
            ("00", "00"),
            ("00", "01"),
            ("01", "11"),
            ("10", "00"),
            ("10", "01"),
            ("11", "10"),
            ("11", "11"),
        ]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
        assert_eq!(edge_labels(&g), expected);
    }

    #[test]
    fn edges_of_00() {
        let g = Digraph::build(&uw("00")).unwrap();
        assert_eq!(g.vertex_count(), 2);
        let expected: Vec<(String, String)> = [("0", "1"), ("1", "0"), ("1", "1")]
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        assert_eq!(edge_labels(&g), expected);
    }

    #[test]
    fn edge_count_and_degrees() {
        for len in 2..=8 {
            for v in 0..(1u64 << len) {
                let k = UniqueWord::from_value(v, len).unwrap();
                let g = Digraph::build(&k).unwrap();
                assert_eq!(g.edges().count(), (1 << len) - 1);
                let mut indeg = vec![0; g.vertex_count()];
                for vert in 0..g.vertex_count() as u32 {
                    let out = g.successors(vert).count();
                    assert!((1..=2).contains(&out));
                    assert_eq!(out == 1, vert == g.end_vertex());
                    for e in g.successors(vert) {
                        indeg[e.to as usize] += 1;
                    }
                }
                for vert in 0..g.vertex_count() as u32 {
                    assert_eq!(g.predecessors(vert).count(), indeg[vert as usize]);
                }
            }
        }
    }

    #[test]
    fn adjacency_of_010() {
        let adj = AdjacencySet::new(&uw("010")).unwrap();
        assert_eq!(
            adj.dense(None),
            vec![
                vec![1, 1, 0, 0],
                vec![0, 0, 0, 1],
                vec![1, 1, 0, 0],
                vec![0, 0, 1, 1]
            ]
        );
        assert_eq!(adj.x(), 0b10);
        assert_eq!(adj.y(), 0b01);
        let a0 = adj.dense(Some(0));
        let a1 = adj.dense(Some(1));
        let a = adj.dense(None);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(a[i][j], a0[i][j] + a1[i][j]);
                assert_eq!(a[i][j], adj.a(i as u32, j as u32));
                assert_eq!(a0[i][j], adj.a_bit(0, i as u32, j as u32));
            }
        }
    }

    #[test]
    fn adjacency_of_00() {
        let adj = AdjacencySet::new(&uw("00")).unwrap();
        assert_eq!(adj.dense(None), vec![vec![0, 1], vec![1, 1]]);
        // 0-edges only enter vertex 0.
        assert_eq!(adj.dense(Some(0)), vec![vec![0, 0], vec![1, 0]]);
    }

    #[test]
    fn walk_counts_examples() {
        let adj = AdjacencySet::new(&uw("00")).unwrap();
        let counts: Vec<u32> = (1..=4)
            .map(|n| adj.walk_count(n + 1).try_into().unwrap())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 3]);
        let adj = AdjacencySet::new(&uw("010")).unwrap();
        assert_eq!(adj.walk_count(6), BigUint::from(7u32));
        // x == y: the empty walk.
        let adj = AdjacencySet::new(&uw("000")).unwrap();
        assert_eq!(adj.x(), adj.y());
        assert_eq!(adj.walk_count(0), BigUint::one());
    }

    #[test]
    fn strong_connectivity() {
        assert!(!Digraph::build(&uw("01")).unwrap().is_strongly_connected());
        assert!(!Digraph::build(&uw("10")).unwrap().is_strongly_connected());
        assert!(Digraph::build(&uw("00")).unwrap().is_strongly_connected());
        assert!(Digraph::build(&uw("010")).unwrap().is_strongly_connected());
        for len in 2..=9 {
            for v in 0..(1u64 << len) {
                let k = UniqueWord::from_value(v, len).unwrap();
                // a^{L-1}b and b a^{L-1} (b != a): the vertex a^{L-1} keeps
                // only its self-loop on one side.
                let bits = k.bits();
                let head_const = bits[..len - 1].iter().all(|&b| b == bits[0]) && bits[len - 1] != bits[0];
                let tail_const = bits[1..].iter().all(|&b| b == bits[1]) && bits[0] != bits[1];
                let expect = !(head_const || tail_const);
                assert_eq!(
                    Digraph::build(&k).unwrap().is_strongly_connected(),
                    expect,
                    "{k}"
                );
            }
        }
    }

    #[test]
    fn rejects_bad_lengths() {
        assert!(matches!(Digraph::build(&uw("0")), Err(Error::UwTooShort(1))));
        let long = UniqueWord::all_zero(25).unwrap();
        assert!(matches!(Digraph::build(&long), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn dot_output_mentions_every_edge() {
        let dot = Digraph::build(&uw("010")).unwrap().to_dot();
        assert!(dot.starts_with("digraph"));
        assert_eq!(dot.matches("->").count(), 7);
    }
}

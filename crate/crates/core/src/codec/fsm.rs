//! Counting state machine over the vertices of `G_k`.
//!
//! Each vertex holds an integer. `Ξ_k` replaces every value by the sum over
//! its in-neighbours; `Ξ_{k,b}` does the same using only edges whose
//! destination ends in bit `b`. A vertex is a counting state when the
//! `L-1` bits `k_1^{L-1}` can be appended from it without completing `k`.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::digraph::AdjacencySet;

/// Counting-state indicator `w = A^{L-1} y`, indexed by vertex.
pub fn counting_states(adj: &AdjacencySet) -> Vec<bool> {
    let graph = adj.graph();
    let uw = graph.uw();
    let tail = &uw.bits()[..uw.len() - 1];
    (0..adj.order() as u32)
        .map(|v| {
            tail.iter()
                .try_fold(v, |state, &b| graph.step(state, b))
                .is_some()
        })
        .collect()
}

/// One of the three update operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transition {
    /// `Ξ_k`: all edges.
    Any,
    /// `Ξ_{k,b}`: edges into vertices ending in `b`.
    Bit(u8),
}

#[derive(Clone, Debug)]
pub struct StateMachine<'a> {
    adj: &'a AdjacencySet,
    values: Vec<BigUint>,
}

impl<'a> StateMachine<'a> {
    /// All states zero except `vertex`, which holds 1.
    pub fn at_vertex(adj: &'a AdjacencySet, vertex: u32) -> Self {
        let mut values = vec![BigUint::zero(); adj.order()];
        values[vertex as usize] = BigUint::one();
        Self { adj, values }
    }

    /// Initialized to `x_k`.
    pub fn at_start(adj: &'a AdjacencySet) -> Self {
        Self::at_vertex(adj, adj.x())
    }

    pub fn apply(&mut self, op: Transition) {
        let bit = match op {
            Transition::Any => None,
            Transition::Bit(b) => Some(b),
        };
        self.values = self.adj.step_row(&self.values, bit);
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    pub fn counting_sum(&self, counting: &[bool]) -> BigUint {
        self.values
            .iter()
            .zip(counting)
            .filter(|(_, &c)| c)
            .map(|(v, _)| v)
            .sum()
    }
}

/// Per-vertex tail counts: `tails[r][v] = e_v^T A^r w`, the number of ways
/// to finish a codeword with `r` more bits from vertex `v`.
#[derive(Clone, Debug, Default)]
pub struct TailTable {
    rows: Vec<Vec<BigUint>>,
}

impl TailTable {
    pub fn new(counting: &[bool]) -> Self {
        let first = counting
            .iter()
            .map(|&c| if c { BigUint::one() } else { BigUint::zero() })
            .collect();
        Self { rows: vec![first] }
    }

    pub fn horizon(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn extend_to(&mut self, adj: &AdjacencySet, r_max: usize) {
        let graph = adj.graph();
        while self.rows.len() <= r_max {
            let prev = self.rows.last().expect("tail table has a first row");
            let next = (0..adj.order() as u32)
                .map(|v| graph.successors(v).map(|e| &prev[e.to as usize]).sum())
                .collect();
            self.rows.push(next);
        }
    }

    pub fn get(&self, r: usize, v: u32) -> &BigUint {
        &self.rows[r][v as usize]
    }
}

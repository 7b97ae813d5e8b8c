//! Exact codeword and constrained-sequence counts, the characteristic
//! polynomial `h_k(z)`, and asymptotic growth rates.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};

use crate::digraph::AdjacencySet;
use crate::error::{Error, Result};
use crate::uw::{OverlapVector, UniqueWord};

/// Largest UW length for [`verify_h_equals_det`].
pub const MAX_DET_UW_LEN: usize = 8;

/// Absolute tolerance of the growth-rate root finder.
pub const ROOT_TOLERANCE: f64 = 1e-12;

/// Tolerance used to bucket UWs into asymptotic equivalence classes.
pub const CLASS_TOLERANCE: f64 = 1e-9;

/// `h_k(z) = (1 - 2z)(1 + sum_{i=1}^{L-1} r_k(i) z^i) + z^L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPolynomial {
    coeffs: Vec<i64>,
}

impl HPolynomial {
    /// `coeffs()[d]` is the coefficient of `z^d`.
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, z: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * z + c as f64)
    }
}

impl std::fmt::Display for HPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (d, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.unsigned_abs();
            match (d, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => f.write_str("z")?,
                (1, m) => write!(f, "{m}z")?,
                (d, 1) => write!(f, "z^{d}")?,
                (d, m) => write!(f, "{m}z^{d}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

fn require_codec_len(uw: &UniqueWord) -> Result<()> {
    if uw.len() < 2 {
        return Err(Error::UwTooShort(uw.len()));
    }
    Ok(())
}

pub fn h_polynomial(uw: &UniqueWord) -> Result<HPolynomial> {
    require_codec_len(uw)?;
    let len = uw.len();
    // q(z) = 1 + sum r(i) z^i, degree <= L-1
    let mut q = vec![0i64; len];
    q[0] = 1;
    for (i, slot) in q.iter_mut().enumerate().skip(1) {
        *slot = i64::from(uw.overlap(i as i64));
    }
    let mut coeffs = vec![0i64; len + 1];
    for (i, &qi) in q.iter().enumerate() {
        coeffs[i] += qi;
        coeffs[i + 1] -= 2 * qi;
    }
    coeffs[len] += 1;
    Ok(HPolynomial { coeffs })
}

/// Coefficients of `det(I - A_k z)`, lowest degree first, trailing zeros
/// trimmed.
///
/// Uses the trace identity `z D'(z) = -D(z) sum_m tr(A^m) z^m`, i.e.
/// `j d_j = -sum_{i=1}^{j} tr(A^i) d_{j-i}`, where `tr(A^m)` counts closed
/// walks of length `m`.
pub fn det_i_minus_az(adj: &AdjacencySet) -> Vec<BigInt> {
    let order = adj.order();
    let mut traces = vec![BigUint::zero(); order + 1];
    for start in 0..order {
        let mut v = vec![BigUint::zero(); order];
        v[start] = BigUint::one();
        for trace in traces.iter_mut().skip(1) {
            v = adj.step_row(&v, None);
            *trace += &v[start];
        }
    }
    let traces: Vec<BigInt> = traces.into_iter().map(BigInt::from).collect();
    let mut d = vec![BigInt::zero(); order + 1];
    d[0] = BigInt::one();
    for j in 1..=order {
        let mut acc = BigInt::zero();
        for i in 1..=j {
            acc -= &traces[i] * &d[j - i];
        }
        debug_assert!((&acc % BigInt::from(j)).is_zero());
        d[j] = acc / BigInt::from(j);
    }
    while d.len() > 1 && d.last().is_some_and(Zero::is_zero) {
        d.pop();
    }
    d
}

/// Checks `h_k(z) == det(I - A_k z)` coefficient by coefficient.
pub fn verify_h_equals_det(uw: &UniqueWord) -> Result<bool> {
    if uw.len() > MAX_DET_UW_LEN {
        return Err(Error::SizeCap {
            what: "symbolic determinant",
            got: uw.len(),
            max: MAX_DET_UW_LEN,
        });
    }
    let h = h_polynomial(uw)?;
    let det = det_i_minus_az(&AdjacencySet::new(uw)?);
    Ok(det.len() == h.coeffs.len()
        && det
            .iter()
            .zip(&h.coeffs)
            .all(|(a, &b)| *a == BigInt::from(b)))
}

/// Next term of the order-`L` recursion shared by `c_{k,n}` and `s_{k,n}`:
/// `x_n = sum_{i=1}^{L-1} r(i) (2 x_{n-i-1} - x_{n-i}) + 2 x_{n-1} - x_{n-L}`,
/// where `n = seq.len() >= L`.
pub(crate) fn lccde_next(overlap: &OverlapVector, seq: &[BigUint]) -> BigUint {
    let len = overlap.len();
    let n = seq.len();
    debug_assert!(n >= len);
    let mut acc = BigInt::from(seq[n - 1].clone()) * 2u32 - BigInt::from(seq[n - len].clone());
    for i in 1..len {
        if overlap.get(i) {
            acc += BigInt::from(seq[n - i - 1].clone()) * 2u32;
            acc -= BigInt::from(seq[n - i].clone());
        }
    }
    match acc.into_parts() {
        (Sign::Minus, _) => unreachable!("recursion produced a negative count"),
        (_, mag) => mag,
    }
}

/// `c_{k,0..=n_max}`: values below `L` from walks on `G_k`, the rest from the
/// recursion. `c_{k,0} = 1` for every `k`.
pub fn count_codewords(uw: &UniqueWord, n_max: usize) -> Result<Vec<BigUint>> {
    require_codec_len(uw)?;
    let adj = AdjacencySet::new(uw)?;
    let len = uw.len();
    let boot = n_max.min(len - 1);
    // c_{k,n} = x^T A^{n+L-1} y
    let walks = adj.walk_counts(boot + len - 1);
    let mut c: Vec<BigUint> = walks[len - 1..].to_vec();
    let overlap = uw.overlap_vector();
    while c.len() <= n_max {
        let next = lccde_next(&overlap, &c);
        c.push(next);
    }
    // Two adjacent UWs always frame the null codeword, even when `k·k`
    // contains `k` internally (e.g. `k = 00`). The walk count above is the
    // value the recursion needs, so the override comes last.
    c[0] = BigUint::one();
    Ok(c)
}

/// `s_{k,0..=n_max}`: length-`n` strings that avoid `k` everywhere.
pub fn count_s(uw: &UniqueWord, n_max: usize) -> Result<Vec<BigUint>> {
    require_codec_len(uw)?;
    let len = uw.len();
    let overlap = uw.overlap_vector();
    let mut s: Vec<BigUint> = (0..len.min(n_max + 1))
        .map(|n| BigUint::one() << n)
        .collect();
    while s.len() <= n_max {
        let next = lccde_next(&overlap, &s);
        s.push(next);
    }
    Ok(s)
}

/// Running sums `F_{k,n} = sum_{i<=n} c_{k,i}`.
pub fn cumulative(c: &[BigUint]) -> Vec<BigUint> {
    let mut acc = BigUint::zero();
    c.iter()
        .map(|x| {
            acc += x;
            acc.clone()
        })
        .collect()
}

/// `c`, `s` and `F` tables for one unique word.
#[derive(Clone, Debug)]
pub struct CountTable {
    uw: UniqueWord,
    c: Vec<BigUint>,
    s: Vec<BigUint>,
    f: Vec<BigUint>,
}

impl CountTable {
    pub fn new(uw: &UniqueWord, n_max: usize) -> Result<Self> {
        let c = count_codewords(uw, n_max)?;
        let s = count_s(uw, n_max)?;
        let f = cumulative(&c);
        Ok(Self {
            uw: uw.clone(),
            c,
            s,
            f,
        })
    }

    pub fn uw(&self) -> &UniqueWord {
        &self.uw
    }

    pub fn n_max(&self) -> usize {
        self.c.len() - 1
    }

    pub fn c(&self) -> &[BigUint] {
        &self.c
    }

    pub fn s(&self) -> &[BigUint] {
        &self.s
    }

    pub fn f(&self) -> &[BigUint] {
        &self.f
    }

    /// `F_{k,n}` with `F_{k,n} = 0` for negative `n`.
    pub fn f_at(&self, n: i64) -> BigUint {
        if n < 0 {
            BigUint::zero()
        } else {
            self.f[n as usize].clone()
        }
    }
}

/// Asymptotic growth rate `g_k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthRate {
    pub value: f64,
    /// Set for `k in {01, 10}`, whose codeword counts grow linearly.
    pub is_degenerate: bool,
}

impl GrowthRate {
    pub fn log2(&self) -> f64 {
        self.value.log2()
    }
}

/// `1 / z*` for the smallest positive root `z*` of `h_k`.
pub fn growth_rate(uw: &UniqueWord) -> Result<GrowthRate> {
    let h = h_polynomial(uw)?;
    if uw.len() == 2 && uw.bit(0) != uw.bit(1) {
        // h = (1 - z)^2: double root at 1, no sign change to bracket.
        return Ok(GrowthRate {
            value: 1.0,
            is_degenerate: true,
        });
    }
    // h(1/2) = 2^{-L} > 0 and g <= 2, so the root lies in (1/2, 1].
    const GRID: usize = 4096;
    let mut lo = 0.5;
    let mut hi = 1.0;
    for step in 1..=GRID {
        let z = 0.5 + 0.5 * step as f64 / GRID as f64;
        if h.eval(z) <= 0.0 {
            hi = z;
            break;
        }
        lo = z;
    }
    while hi - lo > ROOT_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if h.eval(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(GrowthRate {
        value: 2.0 / (lo + hi),
        is_degenerate: false,
    })
}

/// `(2 - 2^{2-L}, 2 - 2^{-L})`.
pub fn growth_rate_bounds(len: usize) -> (f64, f64) {
    let l = len as i32;
    (2.0 - 2f64.powi(2 - l), 2.0 - 2f64.powi(-l))
}

/// The growth rate used as an asymptotic class key.
pub fn asymptotic_class(uw: &UniqueWord) -> Result<f64> {
    Ok(growth_rate(uw)?.value)
}

/// All UWs of length `len` bucketed by growth rate (within
/// [`CLASS_TOLERANCE`]), sorted by descending rate.
pub fn asymptotic_classes(len: usize) -> Result<Vec<(f64, Vec<UniqueWord>)>> {
    let mut rated: Vec<(f64, UniqueWord)> = (0..1u64 << len)
        .map(|v| {
            let k = UniqueWord::from_value(v, len)?;
            Ok((asymptotic_class(&k)?, k))
        })
        .collect::<Result<_>>()?;
    rated.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    let mut classes: Vec<(f64, Vec<UniqueWord>)> = Vec::new();
    for (g, k) in rated {
        match classes.last_mut() {
            Some((rep, members)) if (*rep - g).abs() <= CLASS_TOLERANCE => members.push(k),
            _ => classes.push((g, vec![k])),
        }
    }
    Ok(classes)
}

/// UWs of length `len` grouped by identical `c_{k,0..=n_max}` tables.
///
/// Two UWs with the same overlap vector satisfy the same recursion, so
/// agreement on `0..=L+1` terms already fixes the whole sequence; `n_max`
/// should be at least `2L`.
pub fn count_classes(len: usize, n_max: usize) -> Result<Vec<Vec<UniqueWord>>> {
    let mut classes: Vec<(Vec<BigUint>, Vec<UniqueWord>)> = Vec::new();
    for v in 0..1u64 << len {
        let k = UniqueWord::from_value(v, len)?;
        let c = count_codewords(&k, n_max)?;
        match classes.iter_mut().find(|(key, _)| *key == c) {
            Some((_, members)) => members.push(k),
            None => classes.push((c, vec![k])),
        }
    }
    Ok(classes.into_iter().map(|(_, m)| m).collect())
}

/// Lossy conversion used by the analytic bounds.
pub(crate) fn big_to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uw(s: &str) -> UniqueWord {
        s.parse().unwrap()
    }

    fn small(v: &[BigUint]) -> Vec<u64> {
        v.iter().map(|x| x.try_into().unwrap()).collect()
    }

    #[test]
    fn h_polynomial_examples() {
        assert_eq!(h_polynomial(&uw("000")).unwrap().coeffs(), &[1, -1, -1, -1]);
        for len in 2..=8 {
            let b = UniqueWord::zeros_then_one(len).unwrap();
            let mut expect = vec![0i64; len + 1];
            expect[0] = 1;
            expect[1] = -2;
            expect[len] += 1;
            assert_eq!(h_polynomial(&b).unwrap().coeffs(), expect.as_slice());
            let a = UniqueWord::all_zero(len).unwrap();
            let mut expect = vec![-1i64; len + 1];
            expect[0] = 1;
            assert_eq!(h_polynomial(&a).unwrap().coeffs(), expect.as_slice());
        }
        assert_eq!(h_polynomial(&uw("000")).unwrap().to_string(), "1 - z - z^2 - z^3");
        assert!(h_polynomial(&uw("1")).is_err());
    }

    #[test]
    fn determinant_examples() {
        let det = det_i_minus_az(&AdjacencySet::new(&uw("00")).unwrap());
        assert_eq!(det, vec![BigInt::from(1), BigInt::from(-1), BigInt::from(-1)]);
        assert!(verify_h_equals_det(&uw("010")).unwrap());
        for v in 0..16 {
            assert!(verify_h_equals_det(&UniqueWord::from_value(v, 4).unwrap()).unwrap());
        }
        assert!(verify_h_equals_det(&UniqueWord::all_zero(9).unwrap()).is_err());
    }

    #[test]
    fn codeword_count_examples() {
        let fib = small(&count_codewords(&uw("00"), 10).unwrap());
        assert_eq!(fib, vec![1, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55]);
        let lin = small(&count_codewords(&uw("01"), 10).unwrap());
        assert_eq!(lin, (1..=11).collect::<Vec<u64>>());
        assert_eq!(count_codewords(&uw("010"), 4).unwrap()[4], BigUint::from(7u32));
        // n_max below L
        assert_eq!(small(&count_codewords(&uw("00000"), 2).unwrap()), vec![1, 1, 1]);
    }

    #[test]
    fn s_count_examples() {
        assert_eq!(count_s(&uw("000"), 3).unwrap()[3], BigUint::from(7u32));
        for len in 2..=7 {
            for v in 0..1u64 << len {
                let k = UniqueWord::from_value(v, len).unwrap();
                let s = count_s(&k, len + 2).unwrap();
                for (n, sn) in s.iter().enumerate().take(len) {
                    assert_eq!(*sn, BigUint::one() << n);
                }
                assert_eq!(s[len], (BigUint::one() << len) - 1u32);
            }
        }
    }

    #[test]
    fn cumulative_examples() {
        let t = CountTable::new(&uw("010"), 6).unwrap();
        assert_eq!(t.f()[3], BigUint::from(8u32));
        assert_eq!(t.f_at(-1), BigUint::zero());
        let t = CountTable::new(&uw("00"), 6).unwrap();
        assert_eq!(t.f()[4], BigUint::from(8u32));
        for len in 2..=5 {
            let t = CountTable::new(&UniqueWord::all_zero(len).unwrap(), 3).unwrap();
            assert_eq!(t.f()[0], BigUint::one());
            assert_eq!(t.c()[0], BigUint::one());
        }
    }

    #[test]
    fn count_table_invariants() {
        for len in 2..=6 {
            for v in 0..1u64 << len {
                let k = UniqueWord::from_value(v, len).unwrap();
                let t = CountTable::new(&k, 20).unwrap();
                for n in len..=20 {
                    assert!(t.c()[n] <= t.s()[n]);
                    assert!(t.s()[n] <= BigUint::one() << n);
                }
                for n in 1..=20 {
                    assert_eq!(t.f()[n], &t.f()[n - 1] + &t.c()[n]);
                }
            }
        }
    }

    #[test]
    fn walk_bootstrap_matches_recursion() {
        for len in 2..=6 {
            for v in 0..1u64 << len {
                let k = UniqueWord::from_value(v, len).unwrap();
                let adj = AdjacencySet::new(&k).unwrap();
                let c = count_codewords(&k, len + 8).unwrap();
                for n in len..=len + 8 {
                    assert_eq!(adj.walk_count(n + len - 1), c[n], "{k} n={n}");
                }
            }
        }
    }

    #[test]
    fn growth_rate_examples() {
        let phi = growth_rate(&uw("00")).unwrap();
        assert!((phi.value - 1.618_034).abs() < 1e-6);
        assert!(!phi.is_degenerate);
        let table = [1.618, 1.839, 1.928, 1.966, 1.984, 1.992, 1.996];
        for (len, &expect) in (2..=8).zip(&table) {
            let g = growth_rate(&UniqueWord::all_zero(len).unwrap()).unwrap().value;
            assert!((g - expect).abs() < 1e-3, "L={len}: {g}");
        }
        for len in 3..=9 {
            let b = growth_rate(&UniqueWord::zeros_then_one(len).unwrap()).unwrap().value;
            let a = growth_rate(&UniqueWord::all_zero(len - 1).unwrap()).unwrap().value;
            assert!((a - b).abs() < 1e-9);
        }
        let lin = growth_rate(&uw("10")).unwrap();
        assert!(lin.is_degenerate && lin.value == 1.0);
    }

    #[test]
    fn growth_rate_satisfies_bounds() {
        for len in 2..=10 {
            let (lo, hi) = growth_rate_bounds(len);
            for v in 0..1u64 << len {
                let g = growth_rate(&UniqueWord::from_value(v, len).unwrap()).unwrap().value;
                assert!(g >= lo - 1e-9 && g <= hi + 1e-9, "L={len} v={v} g={g}");
            }
        }
    }

    #[test]
    fn growth_rate_bound_examples() {
        assert_eq!(growth_rate_bounds(4), (1.75, 1.9375));
        assert_eq!(growth_rate_bounds(2), (1.0, 1.75));
        let (lo, hi) = growth_rate_bounds(8);
        assert!((lo - 1.984).abs() < 1e-3 && (hi - 1.996).abs() < 1e-3);
    }

    #[test]
    fn growth_rate_matches_count_ratio() {
        for k in ["0110", "0101", "00100", "0001"] {
            let k = uw(k);
            let c = count_codewords(&k, 400).unwrap();
            let ratio = big_to_f64(&c[400]) / big_to_f64(&c[399]);
            assert!((ratio - growth_rate(&k).unwrap().value).abs() < 1e-9);
        }
    }

    #[test]
    fn asymptotic_class_examples() {
        assert_eq!(asymptotic_class(&uw("00")).unwrap(), asymptotic_class(&uw("11")).unwrap());
        let g1 = asymptotic_class(&uw("0001")).unwrap();
        let g2 = asymptotic_class(&uw("0100")).unwrap();
        assert!(g1 < g2);
        let classes = asymptotic_classes(4).unwrap();
        assert!(classes.len() <= 4);
        assert_eq!(classes.iter().map(|c| c.1.len()).sum::<usize>(), 16);
    }

    #[test]
    fn four_count_classes_at_length_four() {
        let classes = count_classes(4, 12).unwrap();
        assert_eq!(classes.len(), 4);
        for rep in ["0000", "0001", "0100", "0101"] {
            let hits = classes.iter().filter(|c| c.contains(&uw(rep))).count();
            assert_eq!(hits, 1);
        }
        let reps: Vec<usize> = ["0000", "0001", "0100", "0101"]
            .iter()
            .map(|r| classes.iter().position(|c| c.contains(&uw(r))).unwrap())
            .collect();
        let mut distinct = reps.clone();
        distinct.sort();
        distinct.dedup();
        assert_eq!(distinct.len(), 4);
    }
}

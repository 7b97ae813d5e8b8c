//! Upper bounds on the UDOOC average codeword length.
//!
//! All bounds are in bits per symbol of the model they are given; the
//! grouped variants divide by the block length `t` to report per letter.

use crate::codec::EncoderContext;
use crate::enumeration::growth_rate;
use crate::error::{Error, Result};
use crate::source::{codeword_lengths, SourceModel};

fn xlog2x(p: f64) -> f64 {
    if p > 0.0 {
        p * p.log2()
    } else {
        0.0
    }
}

fn log2_growth(ctx: &EncoderContext) -> Result<f64> {
    let g = growth_rate(ctx.uw())?;
    if g.is_degenerate || g.value <= 1.0 {
        return Err(Error::DegenerateGrowth(ctx.uw().to_string()));
    }
    Ok(g.log2())
}

/// `N_k = min{n : F_{k,n} >= M}`.
pub fn n_k(ctx: &EncoderContext, m: usize) -> usize {
    codeword_lengths(ctx, m.max(1)).last().copied().unwrap_or(0)
}

/// `L + (1 - p1) N_k`.
pub fn bound1(ctx: &EncoderContext, p1: f64, m: usize) -> f64 {
    ctx.uw().len() as f64 + (1.0 - p1) * n_k(ctx, m) as f64
}

/// `log_g` of `min_n g^{1-n} F_{k,n-1}` over the given codeword lengths.
fn log_g_min_ratio(ctx: &EncoderContext, lengths: impl IntoIterator<Item = usize>, log2g: f64) -> f64 {
    let mut best = f64::INFINITY;
    let mut last = None;
    for n in lengths {
        if last == Some(n) {
            continue;
        }
        last = Some(n);
        let f_prev = crate::enumeration::big_to_f64(&ctx.f(n as i64 - 1));
        let v = (1.0 - n as f64) + f_prev.log2() / log2g;
        best = best.min(v);
    }
    best
}

/// `log_g K_k` with `K_k = min{g^{1-n_i} F_{k,n_i-1} : i = 2..M}`, where
/// `n_i = min{n : F_{k,n} >= i}`. Only the distinct `n_i` matter.
pub fn log_g_k(ctx: &EncoderContext, m: usize) -> Result<f64> {
    let log2g = log2_growth(ctx)?;
    Ok(log_g_min_ratio(
        ctx,
        codeword_lengths(ctx, m).into_iter().skip(1),
        log2g,
    ))
}

/// `L + (H + p1 log2 p1)/log2 g + (1 - p1)(1 - log_g K_k)`.
pub fn bound2(ctx: &EncoderContext, model: &SourceModel) -> Result<f64> {
    let log2g = log2_growth(ctx)?;
    let p1 = model.p(1);
    let l = ctx.uw().len() as f64;
    if model.len() < 2 {
        return Ok(l);
    }
    let log_k = log_g_k(ctx, model.len())?;
    Ok(l + (model.entropy() + xlog2x(p1)) / log2g + (1.0 - p1) * (1.0 - log_k))
}

/// `L + (H + p1 log2 p1 + p2 log2 p2)/log2(2 - 2^{2-L}) + (2 - 2 p1 - p2)`;
/// independent of the UW itself.
pub fn bound3(len: usize, model: &SourceModel) -> Result<f64> {
    if len <= 2 {
        return Err(Error::UwTooShort(len));
    }
    let (p1, p2) = (model.p(1), model.p(2));
    let denom = (2.0 - 2f64.powi(2 - len as i32)).log2();
    Ok(len as f64 + (model.entropy() + xlog2x(p1) + xlog2x(p2)) / denom + (2.0 - 2.0 * p1 - p2))
}

/// `log_g T` with `T = min{g^{1-n_i} F_{k,n_i-1} : i = 2..M}` and
/// `n_i = min{n : F_{k,n} >= 1/q_i}`.
pub fn log_g_t(ctx: &EncoderContext, model: &SourceModel) -> Result<f64> {
    let log2g = log2_growth(ctx)?;
    let mut n = 0usize;
    let lengths = model.probs()[1..]
        .iter()
        .filter(|&&q| q > 0.0)
        .map(|&q| {
            let target = 1.0 / q;
            while crate::enumeration::big_to_f64(&ctx.f(n as i64)) < target {
                n += 1;
            }
            n
        })
        .collect::<Vec<_>>();
    Ok(log_g_min_ratio(ctx, lengths, log2g))
}

/// Per-letter bound for a `t`-grouped model `q`:
/// `(L + (H(q) + q1 log2 q1)/log2 g + (1 - q1)(1 - log_g T_{k,t})) / t`.
pub fn bound4_grouped(ctx: &EncoderContext, model: &SourceModel, t: usize) -> Result<f64> {
    let log2g = log2_growth(ctx)?;
    let l = ctx.uw().len() as f64;
    if model.len() < 2 {
        return Ok(l / t as f64);
    }
    let q1 = model.p(1);
    let log_t = log_g_t(ctx, model)?;
    Ok((l + (model.entropy() + xlog2x(q1)) / log2g + (1.0 - q1) * (1.0 - log_t)) / t as f64)
}

/// `(H / log2 g, H / log2(2 - 2^{2-L}))` for per-letter entropy `h`. The
/// second component needs `L > 2` and is `NaN` otherwise.
pub fn asymptotic_bound(ctx: &EncoderContext, h: f64) -> Result<(f64, f64)> {
    let log2g = log2_growth(ctx)?;
    let len = ctx.uw().len();
    let second = if len > 2 {
        h / (2.0 - 2f64.powi(2 - len as i32)).log2()
    } else {
        f64::NAN
    };
    Ok((h / log2g, second))
}

/// All bounds for one (UW, grouped model) pair, per source letter.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundsReport {
    pub uw_len: usize,
    pub t: usize,
    pub alphabet: usize,
    pub p1: f64,
    pub p2: f64,
    pub entropy: f64,
    pub growth: f64,
    pub n_k: usize,
    pub log_g_k: Option<f64>,
    pub log_g_t: Option<f64>,
    /// Exact `L_{k,t}`.
    pub exact: f64,
    pub bound1: f64,
    pub bound2: Option<f64>,
    pub bound3: Option<f64>,
    pub bound4: Option<f64>,
}

impl BoundsReport {
    /// Evaluates every applicable bound on `model`, the distribution of
    /// `t`-blocks, dividing by `t`.
    pub fn evaluate(ctx: &EncoderContext, model: &SourceModel, t: usize) -> Result<Self> {
        let t = t.max(1);
        let tf = t as f64;
        let len = ctx.uw().len();
        let m = model.len();
        let degenerate = log2_growth(ctx).is_err();
        let b2 = (!degenerate).then(|| bound2(ctx, model)).transpose()?;
        Ok(Self {
            uw_len: len,
            t,
            alphabet: m,
            p1: model.p(1),
            p2: model.p(2),
            entropy: model.entropy(),
            growth: growth_rate(ctx.uw())?.value,
            n_k: n_k(ctx, m),
            log_g_k: (!degenerate && m > 1).then(|| log_g_k(ctx, m)).transpose()?,
            log_g_t: (!degenerate && m > 1).then(|| log_g_t(ctx, model)).transpose()?,
            exact: crate::source::per_letter_length(ctx, model, t),
            bound1: bound1(ctx, model.p(1), m) / tf,
            bound2: b2.map(|b| b / tf),
            bound3: (len > 2).then(|| bound3(len, model)).transpose()?.map(|b| b / tf),
            bound4: (!degenerate).then(|| bound4_grouped(ctx, model, t)).transpose()?,
        })
    }

    /// Smallest of bounds 1–3.
    pub fn tightest(&self) -> f64 {
        [Some(self.bound1), self.bound2, self.bound3]
            .into_iter()
            .flatten()
            .fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(s: &str) -> EncoderContext {
        EncoderContext::new(&s.parse().unwrap()).unwrap()
    }

    fn model(probs: &[f64]) -> SourceModel {
        SourceModel::new(
            probs
                .iter()
                .enumerate()
                .map(|(i, &p)| (vec![i as u8], p))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn bound1_trivial_cases() {
        let c = ctx("000");
        assert_eq!(bound1(&c, 1.0, 1), 3.0);
        assert_eq!(n_k(&c, 1), 0);
        // F_000 = 1, 2, 3, 5, 9, 16, 29 → 27 symbols need n = 6
        assert_eq!(n_k(&c, 27), 6);
        assert_eq!(bound1(&c, 0.25, 27), 3.0 + 0.75 * 6.0);
    }

    #[test]
    fn bound3_plug_in() {
        let m = model(&[0.5, 0.5]);
        let want = 3.0 + (1.0 - 0.5 - 0.5) / 1.5f64.log2() + 0.5;
        assert!((bound3(3, &m).unwrap() - want).abs() < 1e-12);
        assert!(bound3(2, &m).is_err());
    }

    #[test]
    fn degenerate_growth_is_rejected() {
        let m = model(&[0.5, 0.25, 0.25]);
        assert!(matches!(bound2(&ctx("01"), &m), Err(Error::DegenerateGrowth(_))));
        assert!(bound4_grouped(&ctx("10"), &m, 1).is_err());
        assert!(asymptotic_bound(&ctx("01"), 1.0).is_err());
    }

    #[test]
    fn asymptotic_pair() {
        let c = ctx("0000");
        let (a, b) = asymptotic_bound(&c, 26f64.log2()).unwrap();
        assert!((a - 4.965).abs() < 0.01, "{a}");
        assert!(b > a);
        assert_eq!(asymptotic_bound(&c, 0.0).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn bounds_dominate_exact_length() {
        let zipf: Vec<f64> = {
            let w: Vec<f64> = (1..=40).map(|i| 1.0 / i as f64).collect();
            let s: f64 = w.iter().sum();
            w.iter().map(|x| x / s).collect()
        };
        let m = model(&zipf);
        for uw in ["000", "001", "0000", "0001", "0110", "00000"] {
            let r = BoundsReport::evaluate(&ctx(uw), &m, 1).unwrap();
            assert!(r.exact <= r.bound1 + 1e-12, "{uw}");
            assert!(r.exact <= r.bound2.unwrap() + 1e-12, "{uw}");
            assert!(r.exact <= r.bound3.unwrap() + 1e-12, "{uw}");
            assert!(r.exact <= r.bound4.unwrap() + 1e-12, "{uw}");
        }
    }
}

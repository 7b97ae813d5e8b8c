//! Source statistics: text normalization, empirical and product models,
//! entropy and UDOOC average codeword length.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::codec::EncoderContext;
use crate::error::{Error, Result};

/// Alphabet of normalized text: `a..z` and space.
pub const SPACE: u8 = b' ';

/// Largest alphabet `product_model` will materialize.
pub const MAX_PRODUCT_SIZE: usize = 10_000_000;

const SUM_TOLERANCE: f64 = 1e-9;

/// Case-folds ASCII letters and maps every other octet to a space.
pub fn normalize_text(raw: &[u8]) -> Vec<u8> {
    raw.iter()
        .map(|&b| {
            if b.is_ascii_alphabetic() {
                b.to_ascii_lowercase()
            } else {
                SPACE
            }
        })
        .collect()
}

/// A ranked source: `probs` is nonincreasing and sums to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct SourceModel {
    symbols: Vec<Vec<u8>>,
    probs: Vec<f64>,
}

impl SourceModel {
    /// Builds a model from arbitrary (symbol, probability) pairs; they are
    /// ranked by decreasing probability, ties by symbol.
    pub fn new(pairs: Vec<(Vec<u8>, f64)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Model("empty alphabet".into()));
        }
        if let Some((s, p)) = pairs.iter().find(|(_, p)| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::Model(format!(
                "probability {p} for {:?} is not a nonnegative number",
                String::from_utf8_lossy(s)
            )));
        }
        let total: f64 = pairs.iter().map(|(_, p)| p).sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::Model(format!("probabilities sum to {total}, not 1")));
        }
        Ok(Self::ranked(pairs))
    }

    fn ranked(mut pairs: Vec<(Vec<u8>, f64)>) -> Self {
        pairs.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        let (symbols, probs) = pairs.into_iter().unzip();
        Self { symbols, probs }
    }

    /// Normalizes occurrence counts into a ranked model.
    pub fn from_counts(counts: HashMap<Vec<u8>, u64>) -> Result<Self> {
        let total: u64 = counts.values().sum();
        if total == 0 {
            return Err(Error::Model("no symbols to count".into()));
        }
        let total = total as f64;
        Ok(Self::ranked(
            counts
                .into_iter()
                .map(|(s, c)| (s, c as f64 / total))
                .collect(),
        ))
    }

    /// `m` equiprobable one-octet symbols starting at `a`.
    pub fn uniform_letters(m: usize) -> Result<Self> {
        if m == 0 || m > 256 {
            return Err(Error::Model(format!("alphabet size {m} out of range 1..=256")));
        }
        Ok(Self::ranked(
            (0..m).map(|i| (vec![b'a'.wrapping_add(i as u8)], 1.0 / m as f64)).collect(),
        ))
    }

    pub fn symbols(&self) -> &[Vec<u8>] {
        &self.symbols
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Alphabet size `M`.
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// `p_i` for 1-based rank `i`, zero past the alphabet.
    pub fn p(&self, i: usize) -> f64 {
        i.checked_sub(1)
            .and_then(|j| self.probs.get(j))
            .copied()
            .unwrap_or(0.0)
    }

    /// Shannon entropy in bits.
    pub fn entropy(&self) -> f64 {
        entropy(&self.probs)
    }

    /// Symbol → 1-based rank.
    pub fn rank_map(&self) -> HashMap<&[u8], usize> {
        self.symbols
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_slice(), i + 1))
            .collect()
    }

    /// The ranked distribution as `rank,symbol,probability` CSV.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("rank,symbol,probability\n");
        for (i, (s, p)) in self.symbols.iter().zip(&self.probs).enumerate() {
            let _ = writeln!(out, "{},\"{}\",{p:.12}", i + 1, String::from_utf8_lossy(s));
        }
        out
    }
}

pub fn entropy(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Splits `stream` into `t`-blocks, padding the last with spaces.
pub fn blocks(stream: &[u8], t: usize) -> impl Iterator<Item = Vec<u8>> + '_ {
    stream.chunks(t).map(move |c| {
        let mut b = c.to_vec();
        b.resize(t, SPACE);
        b
    })
}

/// Empirical distribution of non-overlapping `t`-blocks of `stream`.
pub fn empirical_model(stream: &[u8], t: usize) -> Result<SourceModel> {
    if t == 0 {
        return Err(Error::Model("block length must be at least 1".into()));
    }
    if stream.is_empty() {
        return Err(Error::Model("empty symbol stream".into()));
    }
    let mut counts: HashMap<Vec<u8>, u64> = HashMap::new();
    for b in blocks(stream, t) {
        *counts.entry(b).or_default() += 1;
    }
    SourceModel::from_counts(counts)
}

/// i.i.d. product of `base` over `t`-blocks.
pub fn product_model(base: &SourceModel, t: usize) -> Result<SourceModel> {
    if t == 0 {
        return Err(Error::Model("block length must be at least 1".into()));
    }
    let size = u32::try_from(t)
        .ok()
        .and_then(|t| base.len().checked_pow(t))
        .filter(|&s| s <= MAX_PRODUCT_SIZE)
        .ok_or(Error::SizeCap {
            what: "product alphabet",
            got: base.len().saturating_pow(t as u32),
            max: MAX_PRODUCT_SIZE,
        })?;
    let mut pairs: Vec<(Vec<u8>, f64)> = Vec::with_capacity(size);
    pairs.push((Vec::new(), 1.0));
    for _ in 0..t {
        pairs = pairs
            .iter()
            .flat_map(|(s, p)| {
                base.symbols.iter().zip(&base.probs).map(move |(b, q)| {
                    let mut sym = s.clone();
                    sym.extend_from_slice(b);
                    (sym, p * q)
                })
            })
            .collect();
    }
    Ok(SourceModel::ranked(pairs))
}

/// Parses a probability file: one `symbol,probability` pair per line.
/// Blank lines, `#` comments and a `symbol,probability` header are skipped;
/// the symbol `space` (or an empty field) stands for the space symbol.
/// Probabilities are renormalized if they sum to within 1% of 1.
pub fn parse_probability_csv(text: &str) -> Result<SourceModel> {
    let mut pairs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (sym, prob) = line
            .rsplit_once(',')
            .ok_or_else(|| Error::Model(format!("line {}: expected symbol,probability", lineno + 1)))?;
        let sym = sym.trim().trim_matches('"');
        let prob = prob.trim();
        if lineno == 0 && prob.parse::<f64>().is_err() {
            continue;
        }
        let p: f64 = prob
            .parse()
            .map_err(|_| Error::Model(format!("line {}: bad probability {prob:?}", lineno + 1)))?;
        let sym = match sym {
            "" | "space" => vec![SPACE],
            s => s.as_bytes().to_vec(),
        };
        pairs.push((sym, p));
    }
    let total: f64 = pairs.iter().map(|(_, p)| p).sum();
    if (total - 1.0).abs() > 0.01 {
        return Err(Error::Model(format!("probabilities sum to {total}")));
    }
    SourceModel::new(pairs.into_iter().map(|(s, p)| (s, p / total)).collect())
}

pub fn load_probability_file(path: &Path) -> Result<SourceModel> {
    parse_probability_csv(&std::fs::read_to_string(path)?)
}

/// Codeword lengths `n_i = min{n : F_{k,n} >= i}` for ranks `1..=m`.
pub fn codeword_lengths(ctx: &EncoderContext, m: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(m);
    let mut n = 0usize;
    while out.len() < m {
        let reach = ctx.f(n as i64);
        let reach = usize::try_from(&reach).unwrap_or(usize::MAX).min(m);
        out.resize(reach.max(out.len()), n);
        n += 1;
    }
    out
}

/// `L_k = ℓ(k) + Σ p_i ℓ(φ(u_i))`, in bits per (grouped) symbol.
pub fn average_length(ctx: &EncoderContext, model: &SourceModel) -> f64 {
    let lengths = codeword_lengths(ctx, model.len());
    ctx.uw().len() as f64
        + model
            .probs()
            .iter()
            .zip(&lengths)
            .map(|(p, &n)| p * n as f64)
            .sum::<f64>()
}

/// Average length of a `t`-grouped model, per source letter.
pub fn per_letter_length(ctx: &EncoderContext, model: &SourceModel, t: usize) -> f64 {
    average_length(ctx, model) / t as f64
}

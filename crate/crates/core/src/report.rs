//! Tabulated experiments: growth rates, overlap-vector counts, bound grids
//! and the compression comparison.

use std::fmt::Write as _;

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::baselines::{huffman_average_length, lz78_compressed_bits};
use crate::bounds::BoundsReport;
use crate::codec::EncoderContext;
use crate::enumeration::growth_rate;
use crate::error::{Error, Result};
use crate::source::{empirical_model, per_letter_length, product_model, SourceModel};
use crate::uw::{count_overlap_vectors, UniqueWord};

/// Letters drawn when an i.i.d. source needs a concrete stream (LZ78).
pub const SIMULATED_LETTERS: usize = 1_000_000;
const SIMULATION_SEED: u64 = 0x5eed_0d0c;

/// A rectangular table rendered as CSV or aligned text.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(title: &str, headers: &[&str]) -> Self {
        Self {
            title: title.into(),
            headers: headers.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.headers.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self) -> String {
        let widths: Vec<usize> = (0..self.headers.len())
            .map(|c| {
                self.rows
                    .iter()
                    .filter_map(|r| r.get(c))
                    .chain(std::iter::once(&self.headers[c]))
                    .map(String::len)
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = format!("{}\n", self.title);
        let line = |cells: &[String]| {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        };
        let _ = writeln!(out, "{}", line(&self.headers));
        for r in &self.rows {
            let _ = writeln!(out, "{}", line(r));
        }
        out
    }
}

fn f3(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.3}")
    } else {
        "-".into()
    }
}

fn opt3(x: Option<f64>) -> String {
    x.map_or_else(|| "-".into(), f3)
}

/// `0…0` of length `len`.
pub fn all_zero(len: usize) -> UniqueWord {
    UniqueWord::all_zero(len).expect("len >= 1")
}

/// `0…01` of length `len`.
pub fn zeros_then_one(len: usize) -> UniqueWord {
    UniqueWord::zeros_then_one(len).expect("len >= 1")
}

/// Growth rates of `0…0` and `0…01` for `L = 2..=max_len`.
pub fn growth_table(max_len: usize) -> Result<Vec<(usize, f64, f64)>> {
    (2..=max_len)
        .map(|l| {
            Ok((
                l,
                growth_rate(&all_zero(l))?.value,
                growth_rate(&zeros_then_one(l))?.value,
            ))
        })
        .collect()
}

pub fn table1(max_len: usize) -> Result<Table> {
    let mut t = Table::new("Growth rates", &["L", "g_0..0", "g_0..01"]);
    for (l, a, b) in growth_table(max_len)? {
        t.rows.push(vec![l.to_string(), f3(a), f3(b)]);
    }
    Ok(t)
}

pub fn table2(max_len: usize) -> Result<Table> {
    let mut t = Table::new("Distinct overlap vectors", &["L", "N_L"]);
    for l in 1..=max_len {
        t.rows
            .push(vec![l.to_string(), count_overlap_vectors(l)?.to_string()]);
    }
    Ok(t)
}

/// One cell group of the bound grid.
#[derive(Clone, Debug)]
pub struct BoundsCell {
    pub uw: UniqueWord,
    pub report: BoundsReport,
}

/// Bounds for `0…0` and `0…01`, `L = 3..=6`, `t = 1..=3` on a symbol stream.
pub fn bounds_grid(stream: &[u8]) -> Result<Vec<BoundsCell>> {
    let models: Vec<SourceModel> = (1..=3)
        .map(|t| empirical_model(stream, t))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for shape in [all_zero as fn(usize) -> UniqueWord, zeros_then_one] {
        for l in 3..=6 {
            let uw = shape(l);
            let ctx = EncoderContext::new(&uw)?;
            for (i, model) in models.iter().enumerate() {
                out.push(BoundsCell {
                    uw: uw.clone(),
                    report: BoundsReport::evaluate(&ctx, model, i + 1)?,
                });
            }
        }
    }
    Ok(out)
}

pub fn table4(stream: &[u8]) -> Result<Table> {
    let mut t = Table::new(
        "Bounds on per-letter length",
        &["uw", "L", "t", "exact", "bound1", "bound2", "bound3", "bound4"],
    );
    for cell in bounds_grid(stream)? {
        let r = &cell.report;
        t.rows.push(vec![
            cell.uw.to_string(),
            r.uw_len.to_string(),
            r.t.to_string(),
            f3(r.exact),
            f3(r.bound1),
            opt3(r.bound2),
            opt3(r.bound3),
            opt3(r.bound4),
        ]);
    }
    Ok(t)
}

/// Where the letters of a comparison row come from.
pub enum LetterSource<'a> {
    /// A normalized text; grouped models are empirical block statistics.
    Text(&'a [u8]),
    /// An i.i.d. letter model; grouped models are exact products.
    Iid(&'a SourceModel),
}

impl LetterSource<'_> {
    pub fn grouped(&self, t: usize) -> Result<SourceModel> {
        match self {
            LetterSource::Text(s) => empirical_model(s, t),
            LetterSource::Iid(m) => product_model(m, t),
        }
    }

    /// A concrete letter stream: the text itself, or a seeded sample.
    pub fn stream(&self) -> Result<Vec<u8>> {
        match self {
            LetterSource::Text(s) => Ok(s.to_vec()),
            LetterSource::Iid(m) => sample_iid(m, SIMULATED_LETTERS),
        }
    }
}

/// Draws `n` one-octet letters from `model` with a fixed seed.
pub fn sample_iid(model: &SourceModel, n: usize) -> Result<Vec<u8>> {
    if model.symbols().iter().any(|s| s.len() != 1) {
        return Err(Error::Model("sampling needs one-octet symbols".into()));
    }
    let dist = WeightedIndex::new(model.probs()).map_err(|e| Error::Model(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(SIMULATION_SEED);
    Ok((0..n).map(|_| model.symbols()[dist.sample(&mut rng)][0]).collect())
}

/// One comparison row: per-letter lengths for `t = 1, 2, 3`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonRow {
    pub entropy: [f64; 3],
    pub lz78: f64,
    pub huffman: [f64; 3],
    /// `(uw, [t=1, t=2, t=3])` for `0…0` and `0…01` at `L = 2, 4, 6`.
    pub udooc: Vec<(UniqueWord, [f64; 3])>,
}

pub fn comparison_row(source: &LetterSource<'_>) -> Result<ComparisonRow> {
    let models: Vec<SourceModel> = (1..=3).map(|t| source.grouped(t)).collect::<Result<_>>()?;
    let per_t = |f: &dyn Fn(&SourceModel, usize) -> Result<f64>| -> Result<[f64; 3]> {
        Ok([f(&models[0], 1)?, f(&models[1], 2)?, f(&models[2], 3)?])
    };
    let entropy = per_t(&|m, t| Ok(m.entropy() / t as f64))?;
    let huffman = per_t(&|m, t| Ok(huffman_average_length(m)? / t as f64))?;
    let stream = source.stream()?;
    let lz78 = lz78_compressed_bits(&stream) as f64 / stream.len().max(1) as f64;
    let mut udooc = Vec::new();
    for shape in [all_zero as fn(usize) -> UniqueWord, zeros_then_one] {
        for l in [2, 4, 6] {
            let uw = shape(l);
            let ctx = EncoderContext::new(&uw)?;
            udooc.push((uw, per_t(&|m, t| Ok(per_letter_length(&ctx, m, t)))?));
        }
    }
    Ok(ComparisonRow {
        entropy,
        lz78,
        huffman,
        udooc,
    })
}

pub fn table5(rows: &[(&str, ComparisonRow)]) -> Table {
    let mut t = Table::new(
        "Per-letter average lengths",
        &[
            "source", "scheme", "uw", "t=1", "t=2", "t=3",
        ],
    );
    for (name, row) in rows {
        let name = name.to_string();
        let mut push = |scheme: &str, uw: String, v: [f64; 3]| {
            t.rows.push(vec![
                name.clone(),
                scheme.into(),
                uw,
                f3(v[0]),
                f3(v[1]),
                f3(v[2]),
            ]);
        };
        push("entropy", "-".into(), row.entropy);
        push("huffman", "-".into(), row.huffman);
        push("lz78", "-".into(), [row.lz78, f64::NAN, f64::NAN]);
        for (uw, v) in &row.udooc {
            push("udooc", uw.to_string(), *v);
        }
    }
    t
}

/// Entropy, Huffman, LZ78 and one UDOOC on a single text at block length `t`.
pub fn compare(stream: &[u8], uw: &UniqueWord, t: usize) -> Result<Table> {
    let model = empirical_model(stream, t)?;
    let ctx = EncoderContext::new(uw)?;
    let tf = t as f64;
    let mut table = Table::new(
        &format!("Comparison at t = {t} over {} letters", stream.len()),
        &["scheme", "bits/letter"],
    );
    let huffman = if model.len() >= 2 {
        huffman_average_length(&model)? / tf
    } else {
        f64::NAN
    };
    let lz78 = lz78_compressed_bits(stream) as f64 / stream.len().max(1) as f64;
    for (name, v) in [
        ("entropy".to_string(), model.entropy() / tf),
        ("huffman".to_string(), huffman),
        ("lz77".to_string(), f64::NAN),
        ("lz78".to_string(), lz78),
        (format!("udooc {uw}"), per_letter_length(&ctx, &model, t)),
    ] {
        table.rows.push(vec![name, f3(v)]);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn growth_table_matches_known_rates() {
        let rows = growth_table(8).unwrap();
        let a = [1.618, 1.839, 1.928, 1.966, 1.984, 1.992, 1.996];
        for ((_, ga, gb), want) in rows.iter().zip(a) {
            assert!((ga - want).abs() < 1e-3);
            assert!(gb < ga);
        }
    }

    #[test]
    fn uniform_comparison_row() {
        let u = SourceModel::uniform_letters(26).unwrap();
        let models: Vec<SourceModel> = (1..=2).map(|t| product_model(&u, t).unwrap()).collect();
        let ctx = EncoderContext::new(&all_zero(2)).unwrap();
        assert!((per_letter_length(&ctx, &models[0], 1) - 6.961).abs() < 1e-3);
        assert!((per_letter_length(&ctx, &models[1], 2) - 6.820).abs() < 1e-3);
    }

    #[test]
    fn table_rendering() {
        let t = table2(4).unwrap();
        assert_eq!(t.to_csv(), "L,N_L\n1,1\n2,2\n3,3\n4,4\n");
        assert!(t.to_text().contains("N_L"));
    }

    #[test]
    fn sampling_is_deterministic() {
        let u = SourceModel::uniform_letters(4).unwrap();
        assert_eq!(sample_iid(&u, 100).unwrap(), sample_iid(&u, 100).unwrap());
    }
}

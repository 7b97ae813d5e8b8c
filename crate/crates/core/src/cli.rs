//! The `udooc` command line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;

use crate::bits::{format_bits, parse_bits};
use crate::bounds::{asymptotic_bound, BoundsReport};
use crate::codec::{decode_stream_with, encode_stream, Container, Dictionary, EncoderContext};
use crate::digraph::Digraph;
use crate::enumeration::{
    asymptotic_classes, count_classes, growth_rate, h_polynomial, verify_h_equals_det, CountTable,
    MAX_DET_UW_LEN,
};
use crate::error::{Error, Result};
use crate::report::{self, comparison_row, LetterSource};
use crate::source::{empirical_model, load_probability_file, normalize_text, SourceModel};
use crate::uw::UniqueWord;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_BAD_STREAM: i32 = 4;

/// Block lengths above this get a memory warning.
const LARGE_T: usize = 3;

#[derive(Parser, Debug)]
#[command(name = "udooc", version, about = "Uniquely decodable one-to-one codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct UwArg {
    /// Unique word as a 0/1 string, e.g. 0001.
    #[arg(long)]
    pub uw: String,
}

#[derive(Args, Debug, Clone, Default)]
pub struct CsvArg {
    /// Emit CSV instead of aligned text.
    #[arg(long)]
    pub csv: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the digraph G_k (edge list, or DOT with --dot).
    Graph {
        #[command(flatten)]
        uw: UwArg,
        #[arg(long)]
        dot: bool,
    },
    /// Tabulate c_{k,n}, s_{k,n} and F_{k,n}.
    Enum {
        #[command(flatten)]
        uw: UwArg,
        #[arg(long, default_value_t = 20)]
        n_max: usize,
        #[command(flatten)]
        csv: CsvArg,
    },
    /// Growth rate, h_k(z) and the determinant check.
    Growth {
        #[command(flatten)]
        uw: UwArg,
    },
    /// Group all UWs of one length by codeword counts and by growth rate.
    Classes {
        #[arg(long)]
        len: usize,
    },
    /// Upper bounds on the average length for a corpus or probability file.
    Bounds {
        #[command(flatten)]
        uw: UwArg,
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        probs: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[command(flatten)]
        csv: CsvArg,
    },
    /// Encode message indices into codewords.
    Encode {
        #[command(flatten)]
        uw: UwArg,
        #[arg(long, required = true, num_args = 1..)]
        index: Vec<BigUint>,
    },
    /// Decode codewords into message indices ("-" for the null codeword).
    Decode {
        #[command(flatten)]
        uw: UwArg,
        #[arg(long, required = true, num_args = 1..)]
        codeword: Vec<String>,
    },
    /// Frame a list of indices into a .udo container.
    Pack {
        #[command(flatten)]
        uw: UwArg,
        /// Comma or whitespace separated indices.
        #[arg(long)]
        indices: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Print the indices stored in a .udo container.
    Unpack {
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Compress a text file with t-blocks.
    Compress {
        input: PathBuf,
        #[command(flatten)]
        uw: UwArg,
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[arg(short, long)]
        output: PathBuf,
        /// Also write the ranked block distribution as CSV.
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Restore the normalized text from a .udo container.
    Decompress {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Compare entropy, Huffman, LZ78 and a UDOOC on a text.
    Compare {
        corpus: PathBuf,
        #[command(flatten)]
        uw: UwArg,
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[command(flatten)]
        csv: CsvArg,
    },
    /// Regenerate the growth-rate, overlap-vector, bound and comparison tables.
    Tables {
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Letter distribution for an i.i.d. comparison row (`symbol,probability` lines).
        #[arg(long)]
        probs: Option<PathBuf>,
        #[arg(long, default_value_t = 13)]
        max_len: usize,
        #[command(flatten)]
        csv: CsvArg,
    },
}

fn parse_uw(arg: &UwArg) -> Result<UniqueWord> {
    let uw: UniqueWord = arg.uw.parse()?;
    if uw.len() < 2 {
        return Err(Error::UwTooShort(uw.len()));
    }
    if uw.len() == 2 && uw.bit(0) != uw.bit(1) {
        eprintln!("warning: unique word {uw} has a linearly growing codebook");
    }
    Ok(uw)
}

fn read_corpus(path: &Path) -> Result<Vec<u8>> {
    Ok(normalize_text(&fs::read(path)?))
}

fn check_t(t: usize) -> Result<()> {
    if t == 0 {
        return Err(Error::Model("block length t must be at least 1".into()));
    }
    if t > LARGE_T {
        eprintln!("warning: t = {t} may need a very large block alphabet");
    }
    Ok(())
}

fn render(t: &report::Table, csv: &CsvArg) -> String {
    if csv.csv {
        t.to_csv()
    } else {
        t.to_text()
    }
}

fn parse_indices(s: &str) -> Result<Vec<BigUint>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|x| !x.is_empty())
        .map(|x| {
            x.parse::<BigUint>()
                .map_err(|_| Error::Model(format!("bad index {x:?}")))
        })
        .collect()
}

fn run_graph(uw: &UniqueWord, dot: bool) -> Result<String> {
    let g = Digraph::build(uw)?;
    if dot {
        return Ok(g.to_dot());
    }
    let mut out = format!(
        "vertices {} start {} end {} strongly_connected {}\n",
        g.vertex_count(),
        g.vertex_label(g.start_vertex()),
        g.vertex_label(g.end_vertex()),
        g.is_strongly_connected()
    );
    for e in g.edges() {
        out.push_str(&format!(
            "{} -> {} [{}]\n",
            g.vertex_label(e.from),
            g.vertex_label(e.to),
            e.bit
        ));
    }
    Ok(out)
}

fn run_enum(uw: &UniqueWord, n_max: usize, csv: &CsvArg) -> Result<String> {
    let table = CountTable::new(uw, n_max)?;
    let mut t = report::Table {
        title: format!("Counts for {uw}"),
        headers: vec!["n".into(), "c".into(), "s".into(), "F".into()],
        rows: Vec::new(),
    };
    for n in 0..=n_max {
        t.rows.push(vec![
            n.to_string(),
            table.c()[n].to_string(),
            table.s()[n].to_string(),
            table.f()[n].to_string(),
        ]);
    }
    Ok(render(&t, csv))
}

fn run_growth(uw: &UniqueWord) -> Result<String> {
    let g = growth_rate(uw)?;
    let mut out = format!(
        "uw {uw}\nh(z) = {}\ng = {:.12}\nlog2 g = {:.12}\n",
        h_polynomial(uw)?,
        g.value,
        g.log2()
    );
    if uw.len() <= MAX_DET_UW_LEN {
        out.push_str(&format!(
            "h(z) == det(I - A z): {}\n",
            verify_h_equals_det(uw)?
        ));
    }
    Ok(out)
}

fn run_classes(len: usize) -> Result<String> {
    if !(2..=16).contains(&len) {
        return Err(Error::SizeCap {
            what: "class enumeration length",
            got: len,
            max: 16,
        });
    }
    let mut out = String::from("count classes:\n");
    for class in count_classes(len, 2 * len + 2)? {
        let names: Vec<String> = class.iter().map(|k| k.to_string()).collect();
        out.push_str(&format!("  {}\n", names.join(" ")));
    }
    out.push_str("growth-rate classes:\n");
    for (g, members) in asymptotic_classes(len)? {
        let names: Vec<String> = members.iter().map(|k| k.to_string()).collect();
        out.push_str(&format!("  {g:.9}  {}\n", names.join(" ")));
    }
    Ok(out)
}

fn letter_model(corpus: Option<&Path>, probs: Option<&Path>, t: usize) -> Result<SourceModel> {
    match (corpus, probs) {
        (Some(c), _) => empirical_model(&read_corpus(c)?, t),
        (None, Some(p)) => crate::source::product_model(&load_probability_file(p)?, t),
        (None, None) => Err(Error::Model("need --corpus or --probs".into())),
    }
}

fn run_bounds(
    uw: &UniqueWord,
    corpus: Option<&Path>,
    probs: Option<&Path>,
    t: usize,
    csv: &CsvArg,
) -> Result<String> {
    check_t(t)?;
    let ctx = EncoderContext::new(uw)?;
    let model = letter_model(corpus, probs, t)?;
    let r = BoundsReport::evaluate(&ctx, &model, t)?;
    let opt = |x: Option<f64>| x.map_or_else(|| "-".to_string(), |v| format!("{v:.6}"));
    let asym = asymptotic_bound(&ctx, r.entropy / t as f64).ok();
    let rows: Vec<(&str, String)> = vec![
        ("L", r.uw_len.to_string()),
        ("t", r.t.to_string()),
        ("M", r.alphabet.to_string()),
        ("p1", format!("{:.6}", r.p1)),
        ("p2", format!("{:.6}", r.p2)),
        ("H", format!("{:.6}", r.entropy)),
        ("g", format!("{:.6}", r.growth)),
        ("N_k", r.n_k.to_string()),
        ("log_g K", opt(r.log_g_k)),
        ("log_g T", opt(r.log_g_t)),
        ("exact", format!("{:.6}", r.exact)),
        ("bound1", format!("{:.6}", r.bound1)),
        ("bound2", opt(r.bound2)),
        ("bound3", opt(r.bound3)),
        ("bound4", opt(r.bound4)),
        ("asymptotic_g", opt(asym.map(|a| a.0))),
        ("asymptotic_L", opt(asym.map(|a| a.1).filter(|v| v.is_finite()))),
    ];
    let table = report::Table {
        title: format!("Bounds for {uw}"),
        headers: vec!["quantity".into(), "value".into()],
        rows: rows.into_iter().map(|(k, v)| vec![k.into(), v]).collect(),
    };
    Ok(render(&table, csv))
}

fn run_encode(uw: &UniqueWord, indices: &[BigUint]) -> Result<String> {
    let ctx = EncoderContext::new(uw)?;
    let mut out = String::new();
    for m in indices {
        let cw = ctx.encode_index(m)?;
        out.push_str(&format!("{m}\t{}\n", if cw.is_empty() { "-".into() } else { format_bits(&cw) }));
    }
    Ok(out)
}

fn run_decode(uw: &UniqueWord, codewords: &[String]) -> Result<String> {
    let ctx = EncoderContext::new(uw)?;
    let mut out = String::new();
    for s in codewords {
        let bits = if s == "-" {
            Vec::new()
        } else {
            parse_bits(s).map_err(|c| Error::InvalidCodeword {
                uw: uw.to_string(),
                codeword: format!("{s} (bad character {c:?})"),
            })?
        };
        out.push_str(&format!("{s}\t{}\n", ctx.decode_codeword(&bits)?));
    }
    Ok(out)
}

fn run_pack(uw: &UniqueWord, indices: &str, output: &Path) -> Result<String> {
    let ctx = EncoderContext::new(uw)?;
    let indices = parse_indices(indices)?;
    let stream = encode_stream(&ctx, &indices)?;
    let bytes = stream.to_bytes();
    fs::write(output, &bytes)?;
    Ok(format!(
        "{} messages, {} payload bits, {} bytes\n",
        stream.header.message_count,
        stream.header.payload_bit_count,
        bytes.len()
    ))
}

fn read_container(path: &Path) -> Result<(EncoderContext, Container)> {
    let c = Container::from_bytes(&fs::read(path)?)?;
    let ctx = EncoderContext::new(&c.stream.header.uw)?;
    Ok((ctx, c))
}

fn run_unpack(input: &Path, jobs: usize) -> Result<String> {
    let (ctx, c) = read_container(input)?;
    let indices = decode_stream_with(&ctx, &c.stream, jobs)?;
    Ok(indices.iter().map(|m| format!("{m}\n")).collect())
}

/// Normalizes `text`, ranks its `t`-blocks and frames their indices.
pub fn compress_text(text: &[u8], uw: &UniqueWord, t: usize) -> Result<Container> {
    check_t(t)?;
    let stream = normalize_text(text);
    let ctx = EncoderContext::new(uw)?;
    let (indices, entries) = if stream.is_empty() {
        (Vec::new(), Vec::new())
    } else {
        let model = empirical_model(&stream, t)?;
        let ranks = model.rank_map();
        let indices: Vec<BigUint> = crate::source::blocks(&stream, t)
            .map(|b| BigUint::from(ranks[b.as_slice()]))
            .collect();
        (indices, model.symbols().to_vec())
    };
    if entries.len() > u32::MAX as usize || t > u8::MAX as usize {
        return Err(Error::Model("block alphabet too large for the container".into()));
    }
    Ok(Container {
        stream: encode_stream(&ctx, &indices)?,
        dictionary: Some(Dictionary {
            t: t as u8,
            symbol_count: stream.len() as u64,
            entries,
        }),
    })
}

/// Inverse of [`compress_text`] on the normalized text.
pub fn decompress_container(c: &Container, jobs: usize) -> Result<Vec<u8>> {
    let dict = c
        .dictionary
        .as_ref()
        .ok_or_else(|| Error::Container("no block dictionary; use unpack for raw indices".into()))?;
    let ctx = EncoderContext::new(&c.stream.header.uw)?;
    let indices = decode_stream_with(&ctx, &c.stream, jobs)?;
    let mut out = Vec::with_capacity(indices.len() * dict.t as usize);
    for m in indices {
        let entry = usize::try_from(&m)
            .ok()
            .and_then(|i| dict.entries.get(i.wrapping_sub(1)))
            .ok_or_else(|| Error::Container(format!("index {m} outside the block dictionary")))?;
        out.extend_from_slice(entry);
    }
    let n = usize::try_from(dict.symbol_count)
        .map_err(|_| Error::Container("symbol count too large".into()))?;
    if n > out.len() {
        return Err(Error::Container("symbol count exceeds decoded length".into()));
    }
    out.truncate(n);
    Ok(out)
}

fn run_compress(
    input: &Path,
    uw: &UniqueWord,
    t: usize,
    output: &Path,
    stats: Option<&Path>,
) -> Result<String> {
    let text = fs::read(input)?;
    let c = compress_text(&text, uw, t)?;
    let bytes = c.to_bytes();
    fs::write(output, &bytes)?;
    if let Some(p) = stats {
        fs::write(p, empirical_model(&normalize_text(&text), t)?.to_csv())?;
    }
    let letters = c.dictionary.as_ref().map_or(0, |d| d.symbol_count);
    Ok(format!(
        "{letters} letters, {} payload bits ({:.4} bits/letter), {} bytes written\n",
        c.stream.header.payload_bit_count,
        c.stream.header.payload_bit_count as f64 / letters.max(1) as f64,
        bytes.len()
    ))
}

fn run_decompress(input: &Path, output: &Path, jobs: usize) -> Result<String> {
    let c = Container::from_bytes(&fs::read(input)?)?;
    let text = decompress_container(&c, jobs)?;
    fs::write(output, &text)?;
    Ok(format!("{} letters written\n", text.len()))
}

fn run_compare(corpus: &Path, uw: &UniqueWord, t: usize, csv: &CsvArg) -> Result<String> {
    check_t(t)?;
    Ok(render(&report::compare(&read_corpus(corpus)?, uw, t)?, csv))
}

fn run_tables(
    corpus: Option<&Path>,
    probs: Option<&Path>,
    max_len: usize,
    csv: &CsvArg,
) -> Result<String> {
    let mut out = String::new();
    out.push_str(&render(&report::table1(8)?, csv));
    out.push('\n');
    out.push_str(&render(&report::table2(max_len)?, csv));
    out.push('\n');

    let uniform = SourceModel::uniform_letters(26)?;
    let mut rows = vec![("uniform", comparison_row(&LetterSource::Iid(&uniform))?)];
    let prob_model = probs.map(load_probability_file).transpose()?;
    if let Some(m) = &prob_model {
        rows.push(("probs", comparison_row(&LetterSource::Iid(m))?));
    }
    let text = corpus.map(read_corpus).transpose()?;
    if let Some(text) = &text {
        out.push_str(&render(&report::table4(text)?, csv));
        out.push('\n');
        rows.push(("corpus", comparison_row(&LetterSource::Text(text))?));
    } else {
        eprintln!("note: no --corpus given; skipping the corpus bound grid and comparison row");
    }
    out.push_str(&render(&report::table5(&rows), csv));
    Ok(out)
}

fn dispatch(cmd: &Command) -> Result<String> {
    match cmd {
        Command::Graph { uw, dot } => run_graph(&parse_uw(uw)?, *dot),
        Command::Enum { uw, n_max, csv } => run_enum(&parse_uw(uw)?, *n_max, csv),
        Command::Growth { uw } => run_growth(&parse_uw(uw)?),
        Command::Classes { len } => run_classes(*len),
        Command::Bounds {
            uw,
            corpus,
            probs,
            t,
            csv,
        } => run_bounds(&parse_uw(uw)?, corpus.as_deref(), probs.as_deref(), *t, csv),
        Command::Encode { uw, index } => run_encode(&parse_uw(uw)?, index),
        Command::Decode { uw, codeword } => run_decode(&parse_uw(uw)?, codeword),
        Command::Pack {
            uw,
            indices,
            output,
        } => run_pack(&parse_uw(uw)?, indices, output),
        Command::Unpack { input, jobs } => run_unpack(input, *jobs),
        Command::Compress {
            input,
            uw,
            t,
            output,
            stats,
        } => run_compress(input, &parse_uw(uw)?, *t, output, stats.as_deref()),
        Command::Decompress {
            input,
            output,
            jobs,
        } => run_decompress(input, output, *jobs),
        Command::Compare { corpus, uw, t, csv } => run_compare(corpus, &parse_uw(uw)?, *t, csv),
        Command::Tables {
            corpus,
            probs,
            max_len,
            csv,
        } => run_tables(corpus.as_deref(), probs.as_deref(), *max_len, csv),
    }
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        Error::InvalidCodeword { .. } | Error::Framing(_) | Error::Container(_) => EXIT_BAD_STREAM,
        Error::InvalidUw(_) | Error::UwTooShort(_) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

/// Parses `args`, runs the command and writes its output; returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(&cli.command) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("udooc").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn encode_and_decode_commands() {
        let (code, out, _) = run_str(&["encode", "--uw", "010", "--index", "11", "1"]);
        assert_eq!(code, 0);
        assert_eq!(out, "11\t0110\n1\t-\n");
        let (code, out, _) = run_str(&["decode", "--uw", "00", "--codeword", "101"]);
        assert_eq!(code, 0);
        assert_eq!(out, "101\t4\n");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_str(&["bogus"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["encode", "--uw", "0", "--index", "1"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["encode", "--uw", "012", "--index", "1"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["decode", "--uw", "00", "--codeword", "100"]).0, EXIT_BAD_STREAM);
        assert_eq!(run_str(&["unpack", "/nonexistent/x.udo"]).0, EXIT_IO);
    }

    #[test]
    fn compress_roundtrip_in_memory() {
        let text = b"Alice was beginning to get very tired of sitting by her sister, on the bank.";
        for uw in ["00", "01", "0001", "010"] {
            for t in 1..=3 {
                let uw: UniqueWord = uw.parse().unwrap();
                let c = compress_text(text, &uw, t).unwrap();
                let c = Container::from_bytes(&c.to_bytes()).unwrap();
                assert_eq!(decompress_container(&c, 2).unwrap(), normalize_text(text));
            }
        }
        let c = compress_text(b"", &"00".parse().unwrap(), 2).unwrap();
        assert!(decompress_container(&c, 1).unwrap().is_empty());
    }

    #[test]
    fn single_symbol_text_is_all_separators() {
        let uw: UniqueWord = "0001".parse().unwrap();
        let c = compress_text(b"aaaa", &uw, 1).unwrap();
        assert_eq!(format_bits(&c.stream.payload), "0001".repeat(5));
    }
}

//! `gcseq`: build, query and benchmark rank/select/access indexes.
//!
//! Exit codes: 0 on success, 1 when the data is malformed or a query fails,
//! 2 on usage errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gcseq::appart::{ApConfig, ApFallback};
use gcseq::bench::{self, BenchRow, Op, Query};
use gcseq::container::{AnyIndex, StructureTag};
use gcseq::corpus::{self, CorpusReport, Format};
use gcseq::fmindex::FmIndex;
use gcseq::gcc::GccConfig;
use gcseq::huffman::CodeShape;
use gcseq::wavelet::{Backend, BackendPolicy};
use gcseq::{SeqIndex, StructureSpec};

/// Largest alphabet accepted for grammar-compressed structures. Every
/// sampled entry stores one counter per symbol, so larger alphabets go
/// through a wavelet structure or alphabet partitioning instead.
const GCC_MAX_SIGMA: u32 = 65_536;

#[derive(Parser)]
#[command(
    name = "gcseq",
    version,
    about = "Rank/select/access over compressed sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Raw8,
    U32le,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Raw8 => Format::Raw8,
            FormatArg::U32le => Format::U32le,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Plain,
    Rrr,
    Delta,
    Gcc,
    Smallest,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ShapeArg {
    Balanced,
    Huffman,
}

#[derive(Clone, Copy, ValueEnum)]
enum OpArg {
    Access,
    Rank,
    Select,
    Count,
}

impl From<OpArg> for Op {
    fn from(o: OpArg) -> Self {
        match o {
            OpArg::Access => Op::Access,
            OpArg::Rank => Op::Rank,
            OpArg::Select => Op::Select,
            OpArg::Count => Op::Count,
        }
    }
}

#[derive(clap::Args)]
struct BuildArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "raw8")]
    format: FormatArg,
    /// GCC.N, GCC.C, WT, WTH, WM, WMH, MWT, MWTH, AP, AP.RP or FMI.
    #[arg(long)]
    structure: String,
    /// Node representation of wavelet structures.
    #[arg(long, value_enum)]
    backend: Option<BackendArg>,
    /// Sampling period of grammar-compressed parts.
    #[arg(short = 's', long = "sample")]
    sample: Option<usize>,
    /// Superblock factor of GCC.N.
    #[arg(long)]
    sprime: Option<usize>,
    /// Rule sampling threshold.
    #[arg(long)]
    delta: Option<u32>,
    /// Alphabet partitioning: the 2^cut most frequent symbols are stored directly.
    #[arg(long)]
    cut: Option<u32>,
    /// Alphabet partitioning: number of classes kept grammar-compressed.
    #[arg(long)]
    cuto: Option<usize>,
    /// Arity of multi-ary wavelet trees.
    #[arg(long)]
    arity: Option<u32>,
    /// Must agree with the structure tag when given.
    #[arg(long, value_enum)]
    shape: Option<ShapeArg>,
    /// Structure holding the BWT of an FMI.
    #[arg(long, default_value = "GCC.N")]
    bwt: String,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Build an index file from a sequence file.
    Build(Box<BuildArgs>),
    /// Answer a single query.
    Query {
        #[arg(long)]
        index: PathBuf,
        #[arg(long, value_enum)]
        op: OpArg,
        /// access: I; rank: A I; select: A J; count: pattern symbols.
        #[arg(long, num_args = 1.., required = true)]
        args: Vec<u64>,
    },
    /// Time a random workload and print one CSV row.
    Bench {
        #[arg(long)]
        index: PathBuf,
        #[arg(long, value_enum)]
        op: OpArg,
        #[arg(long, default_value_t = 10_000)]
        queries: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Pattern length for count.
        #[arg(long, default_value_t = 8)]
        pattern_len: usize,
        /// Check every answer against the decoded sequence.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        no_header: bool,
    },
    /// Generate a repetitive collection: mutated copies of a random base.
    GenDna {
        #[arg(long, default_value_t = 100_000)]
        length: usize,
        #[arg(long, default_value_t = 4)]
        sigma: u32,
        #[arg(long, default_value_t = 100)]
        copies: usize,
        /// Per-symbol mutation probability of each copy.
        #[arg(long, default_value_t = 0.0)]
        mutation: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value = "raw8")]
        format: FormatArg,
        #[arg(long)]
        output: PathBuf,
    },
    /// Print entropy and repetitiveness statistics as CSV.
    Stats {
        #[arg(long, num_args = 1.., required = true)]
        input: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "raw8")]
        format: FormatArg,
    },
}

enum Failure {
    Usage(String),
    Data(String),
}

impl From<gcseq::Error> for Failure {
    fn from(e: gcseq::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(Failure::Usage(msg.into()))
}

fn read_file(path: &Path) -> CliResult<Vec<u8>> {
    std::fs::read(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    std::fs::write(path, bytes).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn load_index(path: &Path) -> CliResult<AnyIndex> {
    Ok(AnyIndex::from_bytes(&read_file(path)?)?)
}

fn gcc_config(tag: StructureTag, a: &BuildArgs) -> CliResult<GccConfig> {
    let s = a.sample.unwrap_or(1024);
    let delta = a.delta.unwrap_or(1);
    if s == 0 {
        return usage("sampling period must be positive");
    }
    Ok(if tag == StructureTag::GccC {
        if a.sprime.is_some() {
            return usage("--sprime applies to GCC.N only");
        }
        GccConfig::reduced(s, delta)
    } else {
        let sprime = a.sprime.unwrap_or(8);
        if sprime == 0 {
            return usage("--sprime must be positive");
        }
        GccConfig::sequence(s, sprime, delta)
    })
}

/// Turns a structure tag plus flags into a build recipe.
fn spec_for(tag: StructureTag, a: &BuildArgs) -> CliResult<StructureSpec> {
    use StructureTag::*;
    let is_ap = matches!(tag, Ap | ApRp);
    let is_wavelet = matches!(tag, Wt | Wth | Wm | Wmh | Mwt | Mwth);
    if !is_ap && (a.cut.is_some() || a.cuto.is_some()) {
        return usage("--cut and --cuto apply to AP and AP.RP only");
    }
    if a.arity.is_some() && !matches!(tag, Mwt | Mwth) {
        return usage("--arity applies to MWT and MWTH only");
    }
    let backend_ok = match (tag, a.backend) {
        (_, None) => true,
        (GccN | GccC, Some(b)) => matches!(b, BackendArg::Gcc),
        (Ap, Some(b)) => matches!(b, BackendArg::Plain),
        _ => true,
    };
    if !backend_ok {
        return usage(format!("--backend does not apply to {}", tag.name()));
    }
    let gcc = gcc_config(if tag == GccC { GccC } else { GccN }, a)?;
    let shape = if matches!(tag, Wth | Wmh | Mwth) {
        CodeShape::Huffman
    } else {
        CodeShape::Balanced
    };
    if let Some(sh) = a.shape {
        let want = if shape == CodeShape::Huffman {
            ShapeArg::Huffman
        } else {
            ShapeArg::Balanced
        };
        if !is_wavelet || sh != want {
            return usage(format!("--shape conflicts with {}", tag.name()));
        }
    }
    let policy = |b: BackendArg| {
        let mut p = BackendPolicy::new(match b {
            BackendArg::Plain => Backend::Plain,
            BackendArg::Rrr => Backend::Rrr,
            BackendArg::Delta => Backend::Delta,
            BackendArg::Gcc => Backend::Gcc,
            BackendArg::Smallest => Backend::Smallest,
        });
        p.gcc = gcc;
        p
    };
    Ok(match tag {
        GccN | GccC => StructureSpec::Gcc(gcc),
        Wt | Wth => StructureSpec::Tree {
            shape,
            arity: 2,
            policy: policy(a.backend.unwrap_or(BackendArg::Plain)),
        },
        Mwt | Mwth => {
            let arity = a.arity.unwrap_or(4);
            if !(4..=256).contains(&arity) || !arity.is_power_of_two() {
                return usage("--arity must be a power of two between 4 and 256");
            }
            StructureSpec::Tree {
                shape,
                arity,
                policy: policy(a.backend.unwrap_or(BackendArg::Plain)),
            }
        }
        Wm | Wmh => StructureSpec::Matrix {
            shape,
            arity: 2,
            policy: policy(a.backend.unwrap_or(BackendArg::Plain)),
        },
        Ap => {
            if a.cuto.is_some() {
                return usage("--cuto applies to AP.RP only");
            }
            StructureSpec::Ap(ApConfig::plain(a.cut.unwrap_or(8)))
        }
        ApRp => {
            let fallback = match a.backend {
                None | Some(BackendArg::Gcc) | Some(BackendArg::Smallest) => ApFallback::WmRp,
                Some(BackendArg::Plain) => ApFallback::WmPlain,
                Some(_) => return usage("AP.RP fallback is gcc or plain"),
            };
            let mut cfg = ApConfig::rp(a.cut.unwrap_or(8), a.cuto.unwrap_or(3), fallback);
            cfg.gcc = gcc;
            StructureSpec::Ap(cfg)
        }
        Fmi => return usage("FMI cannot hold another FMI"),
    })
}

fn check_gcc_sigma(spec: &StructureSpec, sigma: u32) -> CliResult<()> {
    if matches!(spec, StructureSpec::Gcc(_)) && sigma > GCC_MAX_SIGMA {
        return Err(Failure::Data(format!(
            "alphabet of {sigma} symbols exceeds the grammar-compressed limit of {GCC_MAX_SIGMA}"
        )));
    }
    Ok(())
}

fn print_space(idx: &AnyIndex) {
    let n = idx.len() as f64;
    let bps = |bits: usize| bits as f64 / n;
    println!("structure\t{}", idx.tag().name());
    println!("n\t{}", idx.len());
    let gcc = match idx {
        AnyIndex::Seq(SeqIndex::Gcc(g)) => Some(g),
        AnyIndex::Fm(f) => match f.bwt_index() {
            SeqIndex::Gcc(g) => Some(g),
            _ => None,
        },
        _ => None,
    };
    if let Some(g) = gcc {
        let sp = g.space();
        println!("grammar_bps\t{:.4}", bps(sp.grammar));
        println!("counters_bps\t{:.4}", bps(sp.counters));
        println!("samples_bps\t{:.4}", bps(sp.samples));
    }
    println!("total_bps\t{:.4}", bps(idx.size_in_bits()));
}

fn cmd_build(a: &BuildArgs) -> CliResult<()> {
    let tag = StructureTag::parse(&a.structure)
        .ok_or_else(|| Failure::Usage(format!("unknown structure {}", a.structure)))?;
    let (spec, bwt_spec) = if tag == StructureTag::Fmi {
        let inner = StructureTag::parse(&a.bwt)
            .ok_or_else(|| Failure::Usage(format!("unknown structure {}", a.bwt)))?;
        (None, Some(spec_for(inner, a)?))
    } else {
        (Some(spec_for(tag, a)?), None)
    };
    let data = read_file(&a.input)?;
    let loaded = corpus::decode(&data, a.format.into())?;
    let idx = if let Some(spec) = spec {
        check_gcc_sigma(&spec, loaded.sigma)?;
        AnyIndex::Seq(spec.build(&loaded.seq, loaded.sigma)?)
    } else {
        let spec = bwt_spec.expect("set for FMI");
        check_gcc_sigma(&spec, loaded.sigma.saturating_add(1))?;
        AnyIndex::Fm(FmIndex::build(&loaded.seq, loaded.sigma, &spec)?)
    };
    write_file(&a.output, &idx.to_bytes())?;
    print_space(&idx);
    Ok(())
}

fn parse_query(op: Op, args: &[u64]) -> CliResult<Query> {
    let sym =
        |v: u64| u32::try_from(v).map_err(|_| Failure::Data(format!("symbol {v} out of range")));
    let pos = |v: u64| {
        usize::try_from(v).map_err(|_| Failure::Data(format!("position {v} out of range")))
    };
    match (op, args) {
        (Op::Access, [i]) => Ok(Query::Access(pos(*i)?)),
        (Op::Rank, [a, i]) => Ok(Query::Rank(sym(*a)?, pos(*i)?)),
        (Op::Select, [a, j]) => Ok(Query::Select(sym(*a)?, pos(*j)?)),
        (Op::Count, p) if !p.is_empty() => Ok(Query::Count(
            p.iter().map(|&v| sym(v)).collect::<CliResult<_>>()?,
        )),
        (Op::Access, _) => usage("access takes one argument: I"),
        (Op::Rank, _) => usage("rank takes two arguments: A I"),
        (Op::Select, _) => usage("select takes two arguments: A J"),
        (Op::Count, _) => usage("count takes a pattern"),
    }
}

fn cmd_query(index: &Path, op: Op, args: &[u64]) -> CliResult<()> {
    let q = parse_query(op, args)?;
    let idx = load_index(index)?;
    if matches!(idx, AnyIndex::Fm(_)) != (op == Op::Count) {
        return usage(format!(
            "{} is not supported by {}",
            op.name(),
            idx.tag().name()
        ));
    }
    println!("{}", bench::answer(&idx, &q)?);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    index: &Path,
    op: Op,
    queries: usize,
    seed: u64,
    threads: usize,
    pattern_len: usize,
    verify: bool,
    no_header: bool,
) -> CliResult<()> {
    if queries == 0 {
        return usage("--queries must be positive");
    }
    if threads == 0 {
        return usage("--threads must be positive");
    }
    let idx = load_index(index)?;
    if matches!(idx, AnyIndex::Fm(_)) != (op == Op::Count) {
        return usage(format!(
            "{} is not supported by {}",
            op.name(),
            idx.tag().name()
        ));
    }
    let s = bench::source_sequence(&idx)?;
    let work = bench::workload(&s, op, queries, seed, pattern_len)?;
    let timing = bench::run(&idx, &work, threads)?;
    if verify {
        let bad = bench::verify(&s, &work, &timing.answers);
        if bad > 0 {
            return Err(Failure::Data(format!(
                "{bad} of {queries} answers disagree with the reference"
            )));
        }
    }
    let row = BenchRow {
        structure: idx.tag().name().to_string(),
        op,
        bits_per_symbol: idx.size_in_bits() as f64 / idx.len() as f64,
        avg_micros: timing.avg_micros,
    };
    if !no_header {
        println!("{}", BenchRow::CSV_HEADER);
    }
    println!("{}", row.csv_row());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen_dna(
    length: usize,
    sigma: u32,
    copies: usize,
    mutation: f64,
    seed: u64,
    format: Format,
    output: &Path,
) -> CliResult<()> {
    if length == 0 || copies == 0 {
        return usage("--length and --copies must be positive");
    }
    if !(1..=256).contains(&sigma) {
        return usage("--sigma must be between 1 and 256");
    }
    // the base and the mutations draw from separate streams of the same seed
    let base = corpus::random_sequence(length, sigma, seed);
    let s = corpus::gen_dna(&base, sigma, copies, mutation, seed.wrapping_add(1))?;
    let bytes = match format {
        Format::Raw8 => {
            let alphabet: Vec<u8> = if sigma <= 4 {
                corpus::DNA[..sigma as usize].to_vec()
            } else {
                (0..sigma).map(|a| a as u8).collect()
            };
            corpus::encode_raw8(&s, &alphabet)?
        }
        Format::U32le => corpus::encode_u32le(&s, sigma)?,
    };
    write_file(output, &bytes)
}

fn cmd_stats(inputs: &[PathBuf], format: Format) -> CliResult<()> {
    println!("{}", CorpusReport::CSV_HEADER);
    for path in inputs {
        let loaded = corpus::decode(&read_file(path)?, format)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        println!(
            "{}",
            corpus::report(&name, &loaded.seq, loaded.sigma)?.csv_row()
        );
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Build(a) => cmd_build(&a),
        Command::Query { index, op, args } => cmd_query(&index, op.into(), &args),
        Command::Bench {
            index,
            op,
            queries,
            seed,
            threads,
            pattern_len,
            verify,
            no_header,
        } => cmd_bench(
            &index,
            op.into(),
            queries,
            seed,
            threads,
            pattern_len,
            verify,
            no_header,
        ),
        Command::GenDna {
            length,
            sigma,
            copies,
            mutation,
            seed,
            format,
            output,
        } => cmd_gen_dna(
            length,
            sigma,
            copies,
            mutation,
            seed,
            format.into(),
            &output,
        ),
        Command::Stats { input, format } => cmd_stats(&input, format.into()),
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on its own parse errors
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

//! `sst`: command-line front end for the set shaping toolkit.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use setshape::coding::{Container, SchemeFormat};
use setshape::experiments::{
    parse_key_values, run_exhaustive, run_sampled, shaping_table, type_class_census, CensusReport,
    CensusSide, ExperimentConfig, ExperimentReport, Mode, SourceSpec, TABLE_HEADER,
};
use setshape::{Alphabet, EntropyBase, Error, Sequence, Shaper, ShapingParams};

#[derive(Parser)]
#[command(name = "sst", version, about = "Set shaping transform toolkit")]
struct Cli {
    /// Flat `key = value` file; flags given on the command line win.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Worker threads for experiment commands.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: Option<u16>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Map a sequence to its shaped image of length N + K.
    Transform(SeqArgs),
    /// Map a shaped sequence back to the original.
    Untransform(SeqArgs),
    /// Write a sequence as an SSTC container.
    Encode(EncodeArgs),
    /// Read an SSTC container and print the sequence.
    Decode(Io),
    /// Every message of A^N beside its transform.
    Table(ReportArgs),
    /// Measure all of A^N.
    Exhaustive(ExperimentArgs),
    /// Measure messages drawn from a memoryless source.
    Sample(SampleArgs),
    /// Type-class census of A^N against the shaped subset.
    Census(CensusArgs),
}

#[derive(Args, Clone, Default)]
struct Params {
    /// Message length N.
    #[arg(short = 'n', long = "length")]
    length: Option<u64>,
    /// Alphabet size |A|.
    #[arg(short = 'a', long)]
    alphabet: Option<usize>,
    /// Extra symbols K added by shaping.
    #[arg(short = 'k', long = "k")]
    extra: Option<u64>,
    /// Logarithm base for entropies.
    #[arg(long)]
    base: Option<f64>,
}

#[derive(Args, Clone, Default)]
struct Io {
    /// Read from this file instead of stdin.
    #[arg(short = 'i', long, value_name = "PATH")]
    input: Option<PathBuf>,
    /// Write to this file instead of stdout.
    #[arg(short = 'o', long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SeqArgs {
    /// Sequence text, one-based symbols separated by spaces or commas.
    sequence: Option<String>,
    #[command(flatten)]
    params: Params,
    #[command(flatten)]
    io: Io,
}

#[derive(Args)]
struct EncodeArgs {
    sequence: Option<String>,
    #[command(flatten)]
    params: Params,
    #[arg(long, value_enum)]
    scheme: Option<SchemeArg>,
    /// Apply the transform before coding.
    #[arg(long)]
    shape: bool,
    #[command(flatten)]
    io: Io,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    params: Params,
    #[arg(long, value_enum)]
    format: Option<OutFormat>,
    #[command(flatten)]
    io: Io,
}

#[derive(Args)]
struct ExperimentArgs {
    #[command(flatten)]
    report: ReportArgs,
    #[arg(long, value_enum)]
    scheme: Option<SchemeArg>,
    /// Count container framing in the total size.
    #[arg(long)]
    charge_framing: bool,
    /// Largest population an exhaustive run may walk.
    #[arg(long)]
    cap: Option<u64>,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    experiment: ExperimentArgs,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Symbol probabilities, comma separated; uniform if omitted.
    #[arg(long)]
    pmf: Option<String>,
}

#[derive(Args)]
struct CensusArgs {
    #[command(flatten)]
    report: ReportArgs,
    #[arg(long)]
    max_classes: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    Lengths,
    Counts,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

enum Failure {
    Usage(String),
    Domain(Error),
    Io(PathBuf, io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Domain(_) => 3,
            Failure::Io(..) => 4,
        }
    }

    fn json(&self) -> serde_json::Value {
        let (code, detail) = match self {
            Failure::Usage(m) => ("Usage", m.clone()),
            Failure::Domain(e) => (e.code(), e.to_string()),
            Failure::Io(p, e) => ("Io", format!("{}: {e}", p.display())),
        };
        serde_json::json!({ "error": code, "detail": detail })
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(Failure::Usage(e.to_string().trim().to_string())),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => fail(f),
    }
}

fn fail(f: Failure) -> ExitCode {
    eprintln!("{}", f.json());
    ExitCode::from(f.exit_code())
}

fn run(cli: Cli) -> CliResult<()> {
    let file = match &cli.config {
        Some(path) => parse_key_values(&read_text(Some(path))?)?,
        None => Vec::new(),
    };
    let jobs = cli.jobs;
    match cli.command {
        Command::Transform(a) => cmd_shape(&file, a, false),
        Command::Untransform(a) => cmd_shape(&file, a, true),
        Command::Encode(a) => cmd_encode(&file, a),
        Command::Decode(io) => cmd_decode(io),
        Command::Table(a) => cmd_table(&file, a),
        Command::Exhaustive(a) => {
            let config = experiment_config(&file, &a, &mut no_extra)?;
            let out = a.report.io.output.clone();
            let format = a.report.format.unwrap_or(OutFormat::Json);
            let report = with_jobs(jobs, || run_exhaustive(&config))??;
            write_report(&report, format, out.as_deref())
        }
        Command::Sample(a) => cmd_sample(&file, a, jobs),
        Command::Census(a) => cmd_census(&file, a),
    }
}

/// Settings in precedence order: built-in defaults, config file, flags.
/// Keys the experiment config does not know are left to `extra`.
fn merged_config(
    file: &[(String, String)],
    params: &Params,
    mut extra: impl FnMut(&str, &str) -> CliResult<bool>,
) -> CliResult<ExperimentConfig> {
    let mut config = ExperimentConfig::default();
    for (k, v) in file {
        if !extra(k, v)? {
            config.set(k, v)?;
        }
    }
    if let Some(n) = params.length {
        config.length = n;
    }
    if let Some(a) = params.alphabet {
        config.alphabet = Alphabet::new(a)?;
    }
    if let Some(k) = params.extra {
        config.extra = k;
    }
    if let Some(b) = params.base {
        config.base = EntropyBase::new(b)?;
    }
    Ok(config)
}

fn no_extra(_: &str, _: &str) -> CliResult<bool> {
    Ok(false)
}

type KeyHook<'a> = &'a mut dyn FnMut(&str, &str) -> CliResult<bool>;

fn experiment_config(
    file: &[(String, String)],
    args: &ExperimentArgs,
    extra: KeyHook<'_>,
) -> CliResult<ExperimentConfig> {
    let mut config = merged_config(file, &args.report.params, extra)?;
    if let Some(s) = args.scheme {
        config.formats = formats(s);
    }
    if args.charge_framing {
        config.charge_framing = true;
    }
    if let Some(cap) = args.cap {
        config.exhaustive_cap = cap;
    }
    Ok(config)
}

fn formats(s: SchemeArg) -> Vec<SchemeFormat> {
    match s {
        SchemeArg::Lengths => vec![SchemeFormat::LengthList],
        SchemeArg::Counts => vec![SchemeFormat::CountTable],
        SchemeArg::Both => SchemeFormat::ALL.to_vec(),
    }
}

fn with_jobs<T: Send>(jobs: Option<u16>, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    #[cfg(feature = "parallel")]
    if let Some(n) = jobs {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build()
            .map_err(|e| Failure::Usage(format!("--jobs: {e}")))?;
        return Ok(pool.install(f));
    }
    #[cfg(not(feature = "parallel"))]
    let _ = jobs;
    Ok(f())
}

fn cmd_shape(file: &[(String, String)], args: SeqArgs, inverse: bool) -> CliResult<()> {
    let config = merged_config(file, &args.params, no_extra)?;
    let text = match &args.sequence {
        Some(s) => s.clone(),
        None => read_text(args.io.input.as_deref())?,
    };
    let seq = Sequence::parse(config.alphabet, &text)?;
    let len = seq.len() as u64;
    let length = if inverse {
        len.checked_sub(config.extra)
            .filter(|&n| n > 0)
            .ok_or(Error::BadLength {
                expected: config.extra + 1,
                got: len,
            })?
    } else {
        len
    };
    if let Some(n) = args.params.length {
        if n != length {
            return Err(Error::BadLength {
                expected: if inverse { n + config.extra } else { n },
                got: len,
            }
            .into());
        }
    }
    let params = ShapingParams::new(length, config.alphabet, config.extra)?.with_base(config.base);
    let shaper = Shaper::with_cap(params, config.max_classes)?;
    let out = if inverse {
        shaper.inverse(&seq)?
    } else {
        shaper.transform(&seq)?
    };
    write_out(args.io.output.as_deref(), format!("{out}\n").as_bytes())
}

fn cmd_encode(file: &[(String, String)], args: EncodeArgs) -> CliResult<()> {
    let mut shape = args.shape;
    let mut config = merged_config(file, &args.params, |k, v| {
        if k == "shape" {
            shape |= v
                .parse::<bool>()
                .map_err(|_| Error::InvalidConfig(format!("shape: cannot parse {v:?}")))?;
            return Ok(true);
        }
        Ok(false)
    })?;
    if let Some(s) = args.scheme {
        config.formats = formats(s);
    }
    let format = match config.formats.as_slice() {
        [f] => *f,
        _ if args.scheme.is_none() => SchemeFormat::LengthList,
        _ => return Err(Failure::Usage("encode takes a single --scheme".into())),
    };
    let text = match &args.sequence {
        Some(s) => s.clone(),
        None => read_text(args.io.input.as_deref())?,
    };
    let seq = Sequence::parse(config.alphabet, &text)?;
    let shaper = if shape {
        let params = ShapingParams::new(seq.len() as u64, config.alphabet, config.extra)?;
        Some(Shaper::with_cap(params, config.max_classes)?)
    } else {
        None
    };
    let container = Container::encode(&seq, format, shaper.as_ref())?;
    let bytes = container.to_bytes();
    match &args.io.output {
        Some(path) => {
            write_out(Some(path), &bytes)?;
            let summary = serde_json::json!({
                "format": format.name(),
                "shaped": shape,
                "length": container.length,
                "scheme_bits": container.scheme_bits(),
                "payload_bits": container.payload_bits(),
                "total_bits": container.scheme_bits() + container.payload_bits(),
                "framing_bits": container.framing_bits(),
                "file_bytes": bytes.len(),
            });
            write_out(None, format!("{summary}\n").as_bytes())
        }
        None => write_out(None, &bytes),
    }
}

fn cmd_decode(io: Io) -> CliResult<()> {
    let bytes = read_bytes(io.input.as_deref())?;
    let seq = Container::from_bytes(&bytes)?.decode()?;
    write_out(io.output.as_deref(), format!("{seq}\n").as_bytes())
}

fn cmd_table(file: &[(String, String)], args: ReportArgs) -> CliResult<()> {
    let config = merged_config(file, &args.params, no_extra)?;
    let params = config.shaping_params()?;
    let population = BigUint::from(config.alphabet.size()).pow(config.length as u32);
    if population > BigUint::from(config.exhaustive_cap) || config.length > u32::MAX as u64 {
        return Err(Error::TooLarge {
            population: population.to_string(),
            cap: config.exhaustive_cap,
        }
        .into());
    }
    let rows = shaping_table(&params)?;
    let bytes = match args.format.unwrap_or(OutFormat::Csv) {
        OutFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(TABLE_HEADER).map_err(csv_failure)?;
            for row in &rows {
                w.write_record(row.csv_fields()).map_err(csv_failure)?;
            }
            w.into_inner()
                .map_err(|e| csv_failure(e.into_error().into()))?
        }
        OutFormat::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "m": r.message.to_string(),
                        "weighted_entropy": r.weighted_entropy,
                        "f": r.transformed.to_string(),
                        "transformed_weighted_entropy": r.transformed_weighted_entropy,
                    })
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&rows).expect("rows serialize");
            s.push('\n');
            s.into_bytes()
        }
    };
    write_out(args.io.output.as_deref(), &bytes)
}

fn cmd_sample(file: &[(String, String)], args: SampleArgs, jobs: Option<u16>) -> CliResult<()> {
    let mut pmf_text: Option<String> = None;
    let mut collect = |k: &str, v: &str| -> CliResult<bool> {
        if k == "pmf" {
            pmf_text = Some(v.to_string());
            return Ok(true);
        }
        Ok(false)
    };
    let mut config = experiment_config(file, &args.experiment, &mut collect)?;
    config.mode = Mode::Sampled;
    if let Some(s) = args.samples {
        config.samples = s;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    let spec = match args.pmf.or(pmf_text) {
        Some(text) => {
            let pmf = text
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|_| Error::BadDistribution(format!("cannot parse {t:?}")))
                })
                .collect::<setshape::Result<Vec<_>>>()?;
            SourceSpec::new(config.alphabet, pmf, config.seed)?
        }
        None => SourceSpec::uniform(config.alphabet, config.seed),
    };
    let report = with_jobs(jobs, || run_sampled(&config, &spec))??;
    let format = args.experiment.report.format.unwrap_or(OutFormat::Json);
    write_report(&report, format, args.experiment.report.io.output.as_deref())
}

fn cmd_census(file: &[(String, String)], args: CensusArgs) -> CliResult<()> {
    let mut config = merged_config(file, &args.report.params, no_extra)?;
    if let Some(m) = args.max_classes {
        config.max_classes = m;
    }
    let report = type_class_census(
        config.length,
        config.alphabet,
        config.extra,
        config.max_classes,
    )?;
    let bytes = match args.report.format.unwrap_or(OutFormat::Json) {
        OutFormat::Json => {
            let mut s = serde_json::to_string_pretty(&report).expect("census serializes");
            s.push('\n');
            s.into_bytes()
        }
        OutFormat::Csv => census_csv(&report)?,
    };
    write_out(args.report.io.output.as_deref(), &bytes)
}

fn census_csv(report: &CensusReport) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "set",
        "length",
        "classes",
        "classes_below_full_support",
        "class_fraction_below",
        "sequences",
        "sequences_below_full_support",
        "sequence_fraction_below",
    ])
    .map_err(csv_failure)?;
    let row = |name: &str, s: &CensusSide| {
        vec![
            name.to_string(),
            s.length.to_string(),
            s.classes.to_string(),
            s.classes_below_full_support.to_string(),
            s.class_fraction_below.to_string(),
            s.sequences.to_string(),
            s.sequences_below_full_support.to_string(),
            s.sequence_fraction_below.to_string(),
        ]
    };
    w.write_record(row("plain", &report.plain))
        .map_err(csv_failure)?;
    w.write_record(row("shaped", &report.shaped))
        .map_err(csv_failure)?;
    w.into_inner()
        .map_err(|e| csv_failure(e.into_error().into()))
}

fn write_report(report: &ExperimentReport, format: OutFormat, out: Option<&Path>) -> CliResult<()> {
    let bytes = match format {
        OutFormat::Json => {
            let mut s = report.to_json();
            s.push('\n');
            s.into_bytes()
        }
        OutFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["metric", "value"]).map_err(csv_failure)?;
            for (k, v) in report.metric_rows() {
                w.write_record([k, v]).map_err(csv_failure)?;
            }
            w.into_inner()
                .map_err(|e| csv_failure(e.into_error().into()))?
        }
    };
    write_out(out, &bytes)
}

fn csv_failure(e: csv::Error) -> Failure {
    Failure::Io(PathBuf::from("<csv>"), io::Error::other(e))
}

fn read_bytes(path: Option<&Path>) -> CliResult<Vec<u8>> {
    match path {
        Some(p) => fs::read(p).map_err(|e| Failure::Io(p.to_path_buf(), e)),
        None => {
            let mut buf = Vec::new();
            io::stdin()
                .read_to_end(&mut buf)
                .map_err(|e| Failure::Io(PathBuf::from("<stdin>"), e))?;
            Ok(buf)
        }
    }
}

fn read_text(path: Option<&Path>) -> CliResult<String> {
    let bytes = read_bytes(path)?;
    String::from_utf8(bytes).map_err(|_| Error::Parse("input is not UTF-8".into()).into())
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| Failure::Io(p.to_path_buf(), e)),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)
                .and_then(|()| out.flush())
                .map_err(|e| Failure::Io(PathBuf::from("<stdout>"), e))
        }
    }
}

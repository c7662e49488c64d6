//! `cuboid`: batch driver for verification, the (u, z) parametrization,
//! inversion, scanning and oracle cross-validation.
//!
//! Exit codes: 0 success, 1 checked failure, 2 usage or parse error,
//! 3 checkpoint mismatch, 42 verified perfect-cuboid discovery.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cuboid_core::arith::{fmt_rational, parse_rational, rat, rational_sqrt, Natural, Rational};
use cuboid_core::charpoly::{char_eval, invert_ab, invert_ab_real, solve_char_for_u};
use cuboid_core::interval::Real;
use cuboid_core::model::{classify_triple, CuboidSeptuple};
use cuboid_core::param::{ab_squared, aux_from_uz, d2_squared, d3_squared, forward, ParamUZ};
use cuboid_core::records::{
    class_counts, format_oracle_record, format_summary, parse_oracle_record, parse_scan_record, parse_summary,
    OutputFormat, VerdictCounts, ORACLE_CSV_HEADER, SCAN_CSV_HEADER, SUMMARY_PREFIX,
};
use cuboid_core::search::checkpoint::{run_scan, run_scan_to_file, Checkpoint, ScanConfig};
use cuboid_core::search::crossval::{cross_validate_records, CrossValidationReport};
use cuboid_core::search::rank::DEFAULT_TRIAL_BOUND;
use cuboid_core::search::scan::axis;
use cuboid_core::search::{brute_force_cuboids, near_miss_rank, scan_point, OracleRecord, SearchRecord, Verdict};
use cuboid_core::Error;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CHECKPOINT: u8 = 3;
const EXIT_DISCOVERY: u8 = 42;

#[derive(Parser)]
#[command(name = "cuboid", version, about = "Exact search tools for perfect Euler cuboids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the four defining equations of a septuple a b c alpha beta gamma d.
    Verify {
        #[arg(num_args = 7, value_names = ["A", "B", "C", "ALPHA", "BETA", "GAMMA", "D"])]
        values: Vec<String>,
    },
    /// Classify an edge triple by its integer diagonals.
    Classify {
        #[arg(num_args = 3, value_names = ["A", "B", "C"])]
        edges: Vec<String>,
        #[arg(long, default_value = "jsonl")]
        format: OutputFormat,
    },
    /// Map (u, z) to the unit-sphere point and (a², b²).
    Forward { u: String, z: String },
    /// Solve the characteristic equation for (u, z) given (a², b²).
    Invert { a_sq: String, b_sq: String },
    /// Scan all (u, z) pairs of height at most --bound.
    Scan(ScanArgs),
    /// Brute-force integer triples with at least two integer face diagonals.
    Oracle {
        #[arg(long)]
        edges: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "jsonl")]
        format: OutputFormat,
    },
    /// Check oracle records against the parametrization and inversion.
    CrossValidate {
        /// Brute-force up to this edge bound (ignored with --input).
        #[arg(long, required_unless_present = "input")]
        edges: Option<u64>,
        /// Validate records from an oracle output file instead.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value = "jsonl")]
        format: OutputFormat,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Also round-trip this many random (u, z) points through forward and inversion.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
    /// Summarize a scan output file and list the closest one-square near misses.
    Report {
        input: PathBuf,
        #[arg(long, default_value = "jsonl")]
        format: OutputFormat,
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    bound: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Checkpoint file; an existing one resumes the run. Requires --out.
    #[arg(long, requires = "out")]
    checkpoint: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "jsonl")]
    format: OutputFormat,
    /// Stop after this many rows, leaving the checkpoint resumable.
    #[arg(long, hide = true)]
    max_rows: Option<usize>,
}

/// Anything that ends a command early, carrying its exit code.
struct Exit {
    code: u8,
    message: String,
}

impl Exit {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CheckpointMismatch(_) => EXIT_CHECKPOINT,
            Error::Internal(_) | Error::NotPerfect | Error::InconsistentSquares(_) => EXIT_FAIL,
            _ => EXIT_USAGE,
        };
        Exit::new(code, e.to_string())
    }
}

impl From<io::Error> for Exit {
    fn from(e: io::Error) -> Self {
        Exit::new(EXIT_USAGE, e.to_string())
    }
}

type CmdResult = Result<u8, Exit>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify { values } => cmd_verify(&values),
        Command::Classify { edges, format } => cmd_classify(&edges, format),
        Command::Forward { u, z } => cmd_forward(&u, &z),
        Command::Invert { a_sq, b_sq } => cmd_invert(&a_sq, &b_sq),
        Command::Scan(args) => cmd_scan(&args),
        Command::Oracle { edges, workers, out, format } => cmd_oracle(edges, workers, out.as_deref(), format),
        Command::CrossValidate { edges, input, format, workers, samples, seed } => {
            cmd_cross_validate(edges, input.as_deref(), format, workers, samples, seed)
        }
        Command::Report { input, format, top } => cmd_report(&input, format, top),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn check_bound(name: &str, v: u64) -> Result<(), Exit> {
    if v < 2 {
        return Err(Exit::new(EXIT_USAGE, format!("{name} must be at least 2")));
    }
    Ok(())
}

fn check_workers(w: usize) -> Result<(), Exit> {
    if w < 1 {
        return Err(Exit::new(EXIT_USAGE, "--workers must be at least 1"));
    }
    Ok(())
}

fn pool(workers: usize) -> Result<rayon::ThreadPool, Exit> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Exit::new(EXIT_FAIL, e.to_string()))
}

fn parse_natural(s: &str) -> Result<Natural, Exit> {
    s.trim().parse().map_err(|_| Exit::new(EXIT_USAGE, format!("not a non-negative integer: {s:?}")))
}

fn parse_edge(s: &str) -> Result<u64, Exit> {
    s.trim().parse().map_err(|_| Exit::new(EXIT_USAGE, format!("not an edge length: {s:?}")))
}

fn square_note(v: &Rational) -> String {
    match rational_sqrt(v) {
        Ok(Some(w)) => format!("  SQUARE (witness {})", fmt_rational(&w)),
        _ => String::new(),
    }
}

fn cmd_verify(values: &[String]) -> CmdResult {
    let v: Vec<Natural> = values.iter().map(|s| parse_natural(s)).collect::<Result<_, _>>()?;
    let s = CuboidSeptuple::new(v.try_into().expect("clap enforces seven values"))?;
    let labels = ["a²+b² = γ²", "b²+c² = α²", "c²+a² = β²", "a²+b²+c² = d²"];
    let eqs = s.equations();
    for (label, ok) in labels.iter().zip(eqs) {
        println!("{label:<14} {ok}");
    }
    if eqs.iter().all(|&ok| ok) {
        println!("PERFECT");
        Ok(0)
    } else {
        println!("not perfect");
        Ok(EXIT_FAIL)
    }
}

fn cmd_classify(edges: &[String], format: OutputFormat) -> CmdResult {
    let e: Vec<u64> = edges.iter().map(|s| parse_edge(s)).collect::<Result<_, _>>()?;
    let t = classify_triple(e[0], e[1], e[2])?;
    let r = OracleRecord::from_classification(t)?;
    if format == OutputFormat::Csv {
        println!("{ORACLE_CSV_HEADER}");
    }
    println!("{}", format_oracle_record(&r, format));
    Ok(0)
}

fn cmd_forward(u: &str, z: &str) -> CmdResult {
    let p = ParamUZ::new(parse_rational(u)?, parse_rational(z)?)?;
    let f = forward(&p);
    let ab = ab_squared(&p);
    let aux = aux_from_uz(&p);
    let residual = char_eval(&p.u_sq(), &ab.a_sq, &ab.b_sq);
    let rows: [(&str, &Rational, bool); 11] = [
        ("x1", &f.x1, false),
        ("x2", &f.x2, false),
        ("x3", &f.x3, false),
        ("d1", &f.d1, false),
        ("d2_sq", &d2_squared(&p), true),
        ("d3_sq", &d3_squared(&p), true),
        ("a_sq", &ab.a_sq, true),
        ("b_sq", &ab.b_sq, true),
        ("xi", &aux.xi, false),
        ("zeta", &aux.zeta, false),
        ("theta", &aux.theta, false),
    ];
    for (name, v, flag) in rows {
        let note = if flag { square_note(v) } else { String::new() };
        println!("{name:<9}{}{note}", fmt_rational(v));
    }
    println!("{:<9}{}", "residual", fmt_rational(&residual));
    Ok(0)
}

fn show_real(r: &Real) -> String {
    match r {
        Real::Exact(_) => r.to_string(),
        Real::Interval { .. } => format!("~{:.17} in {r}", r.to_f64()),
    }
}

fn cmd_invert(a_sq: &str, b_sq: &str) -> CmdResult {
    let (a_sq, b_sq) = (parse_rational(a_sq)?, parse_rational(b_sq)?);
    // Domain errors surface here before any solving.
    let real = invert_ab_real(&a_sq, &b_sq)?;
    let roots = solve_char_for_u(&a_sq, &b_sq)?;
    let co = &roots.coefficients;
    println!("A        {}", fmt_rational(&co.lead));
    println!("B        {}", fmt_rational(&co.mid));
    println!("C        {}", fmt_rational(&co.constant));
    println!("disc     {}", fmt_rational(&roots.discriminant));
    for r in &roots.roots {
        println!("root     {}", show_real(r));
    }
    let Some(t) = &roots.selection else {
        println!("no root in (0, 1)");
        return Ok(EXIT_FAIL);
    };
    println!("t        {}", show_real(t));
    match invert_ab(&a_sq, &b_sq)? {
        Some(p) => {
            println!("u        {}", fmt_rational(p.u()));
            println!("z        {}", fmt_rational(p.z()));
        }
        None => {
            let (u, z) = real.ok_or_else(|| Exit::new(EXIT_FAIL, "selected root without real inverse"))?;
            println!("u        {} (irrational)", show_real(&u));
            println!("z        {}", show_real(&z));
        }
    }
    Ok(0)
}

fn cmd_scan(args: &ScanArgs) -> CmdResult {
    check_bound("--bound", args.bound)?;
    check_workers(args.workers)?;
    let cfg = ScanConfig { bound: args.bound, workers: args.workers, format: args.format, max_rows: args.max_rows };
    let outcome = match &args.out {
        Some(path) => run_scan_to_file(&cfg, path, args.checkpoint.as_deref())?,
        None => {
            let stdout = io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            let state = Checkpoint::fresh(cfg.bound, cfg.format, axis(cfg.bound).len());
            run_scan(&cfg, &mut out, state, |_| Ok(()))?
        }
    };
    let c = &outcome.checkpoint;
    if !outcome.completed {
        eprintln!("stopped after {} of {} rows; rerun with the same checkpoint to resume", c.next_row, c.rows);
    }
    eprintln!("{}", format_summary(&c.counts));
    if !outcome.discoveries.is_empty() {
        for s in &outcome.discoveries {
            let e = s.entries().map(|x| x.to_string()).join(" ");
            eprintln!("PERFECT CUBOID: {e}");
        }
        return Ok(EXIT_DISCOVERY);
    }
    Ok(0)
}

fn write_oracle(records: &[OracleRecord], format: OutputFormat, out: &mut dyn Write) -> io::Result<()> {
    if format == OutputFormat::Csv {
        writeln!(out, "{ORACLE_CSV_HEADER}")?;
    }
    for r in records {
        writeln!(out, "{}", format_oracle_record(r, format))?;
    }
    writeln!(out, "{}", format_summary(&class_counts(records)))?;
    out.flush()
}

fn cmd_oracle(edges: u64, workers: usize, out: Option<&Path>, format: OutputFormat) -> CmdResult {
    check_bound("--edges", edges)?;
    check_workers(workers)?;
    let records = pool(workers)?.install(|| brute_force_cuboids(edges))?;
    match out {
        Some(path) => {
            write_oracle(&records, format, &mut BufWriter::new(File::create(path)?))?;
            eprintln!("{}", format_summary(&class_counts(&records)));
        }
        None => write_oracle(&records, format, &mut BufWriter::new(io::stdout().lock()))?,
    }
    Ok(0)
}

/// Data lines of a record file: no header, comments or summary.
fn data_lines<'a>(text: &'a str, header: &str) -> impl Iterator<Item = (usize, String)> + 'a {
    let header = header.to_string();
    text.lines()
        .enumerate()
        .filter(move |(_, l)| !l.trim().is_empty() && !l.starts_with('#') && *l != header)
        .map(|(i, l)| (i + 1, l.to_string()))
}

fn read_oracle_file(path: &Path, format: OutputFormat) -> Result<Vec<OracleRecord>, Exit> {
    let text = fs::read_to_string(path).map_err(|e| Exit::new(EXIT_USAGE, format!("{}: {e}", path.display())))?;
    data_lines(&text, ORACLE_CSV_HEADER)
        .map(|(n, l)| {
            parse_oracle_record(&l, format).map_err(|e| Exit::new(EXIT_USAGE, format!("{}:{n}: {e}", path.display())))
        })
        .collect()
}

fn random_unit(rng: &mut ChaCha8Rng) -> Rational {
    let q = rng.gen_range(2..=10_000i64);
    rat(rng.gen_range(1..q), q)
}

/// Forward then inverse on random points; returns the number checked.
fn sample_round_trips(samples: usize, seed: u64) -> Result<usize, Exit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let p = ParamUZ::new(random_unit(&mut rng), random_unit(&mut rng))?;
        let rec = scan_point(&p)?;
        match invert_ab(&rec.a_sq, &rec.b_sq)? {
            Some(back) if back == p => {}
            other => {
                return Err(Exit::new(
                    EXIT_FAIL,
                    format!("sample ({}, {}) inverted to {other:?}", fmt_rational(p.u()), fmt_rational(p.z())),
                ))
            }
        }
    }
    Ok(samples)
}

fn cmd_cross_validate(
    edges: Option<u64>,
    input: Option<&Path>,
    format: OutputFormat,
    workers: usize,
    samples: usize,
    seed: u64,
) -> CmdResult {
    check_workers(workers)?;
    let records = match (input, edges) {
        (Some(path), _) => read_oracle_file(path, format)?,
        (None, Some(edges)) => {
            check_bound("--edges", edges)?;
            pool(workers)?.install(|| brute_force_cuboids(edges))?
        }
        (None, None) => return Err(Exit::new(EXIT_USAGE, "one of --edges or --input is required")),
    };
    let report: CrossValidationReport = match cross_validate_records(&records) {
        Ok(r) => r,
        Err(f) => {
            println!("FAIL {f}");
            println!("record: {}", format_oracle_record(&f.record, OutputFormat::Jsonl));
            return Ok(EXIT_FAIL);
        }
    };
    let sampled = sample_round_trips(samples, seed)?;
    println!(
        "validated {} records ({} face cuboids, {} Euler bricks, {} perfect), {} checks passed",
        report.records, report.face_cuboids, report.euler_bricks, report.perfect, report.checks_passed
    );
    if samples > 0 {
        println!("round-tripped {sampled} random points (seed {seed})");
    }
    Ok(0)
}

fn cmd_report(input: &Path, format: OutputFormat, top: usize) -> CmdResult {
    let text = fs::read_to_string(input).map_err(|e| Exit::new(EXIT_USAGE, format!("{}: {e}", input.display())))?;
    let mut counts = VerdictCounts::default();
    let mut nonzero_residuals = 0u64;
    let mut ranked: Vec<(Natural, bool, SearchRecord)> = Vec::new();
    for (n, line) in data_lines(&text, SCAN_CSV_HEADER) {
        let rec = parse_scan_record(&line, format)
            .map_err(|e| Exit::new(EXIT_USAGE, format!("{}:{n}: {e}", input.display())))?;
        counts.add(rec.verdict);
        if rec.residual != Rational::default() {
            nonzero_residuals += 1;
        }
        // Near misses are records with exactly one square.
        if matches!(rec.verdict, Verdict::AOnly | Verdict::BOnly) && top > 0 {
            let k = near_miss_rank(&rec, DEFAULT_TRIAL_BOUND)?;
            ranked.push((k.value, k.complete, rec));
            // Keep the list short as we go; ties broken by scan order.
            if ranked.len() > 4 * top {
                ranked.sort_by(|a, b| a.0.cmp(&b.0));
                ranked.truncate(top);
            }
        }
    }
    ranked.sort_by(|a, b| a.0.cmp(&b.0));
    ranked.truncate(top);

    let summary = text.lines().rev().find(|l| l.starts_with(SUMMARY_PREFIX));
    let mut status = 0;
    match summary {
        Some(line) => {
            let recorded: VerdictCounts = parse_summary(line)?;
            if recorded != counts {
                println!("summary mismatch: file says {line}");
                status = EXIT_FAIL;
            }
        }
        None => println!("no summary line (incomplete scan?)"),
    }
    println!(
        "records {}  BOTH_SQUARE {}  A_ONLY {}  B_ONLY {}  NONE {}",
        counts.records, counts.both_square, counts.a_only, counts.b_only, counts.none
    );
    println!("nonzero residuals {nonzero_residuals}");
    if nonzero_residuals > 0 {
        status = EXIT_FAIL;
    }
    if !ranked.is_empty() {
        println!("closest near misses (one square; squarefree kernel of the other):");
        for (k, complete, r) in &ranked {
            let mark = if *complete { "" } else { "?" };
            println!(
                "  kernel {k}{mark}  u={} z={} a_sq={} b_sq={} {}",
                fmt_rational(&r.u),
                fmt_rational(&r.z),
                fmt_rational(&r.a_sq),
                fmt_rational(&r.b_sq),
                r.verdict
            );
        }
    }
    Ok(status)
}

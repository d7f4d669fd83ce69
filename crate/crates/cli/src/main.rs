//! `gapdyn`: command-line front end for gap cycles, censuses and the gap
//! ratio dynamics.

mod parse;
mod report;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gapdyn_core::census::{census_rows, rows_to_csv, rows_to_json, rows_to_table, CensusTable};
use gapdyn_core::dynamics::{
    asymptotic_formula, decade_checkpoints, eigendecomposition, rational_to_f64, system_dense,
    transfer_with_checkpoints, DenseMatrix, DoubleDouble, RatioVector, Scalar, TransferMatrix,
};
use gapdyn_core::gap_cycle::{cycle_for, write_cycle, write_cycle_text, CycleLimits, GapCycle};
use gapdyn_core::prime_engine::{
    gap_census, is_prime, ratio_to_two, PrimeRange, SieveConfig, DEFAULT_SEGMENT_ODDS,
};
use gapdyn_core::{Error, ExecPolicy};
use num_rational::BigRational;
use report::{Cell, Report};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_OTHER: u8 = 1;
const EXIT_ARGUMENT: u8 = 2;
const EXIT_CAPACITY: u8 = 3;
const EXIT_IO: u8 = 4;

/// Ranges ending above this need `--long`.
const LONG_THRESHOLD: u64 = 1_000_000_000;

const BRENT_HL: &str = include_str!("../data/brent_hl_ratios.csv");

#[derive(Parser)]
#[command(
    name = "gapdyn",
    version,
    about = "Gap cycles, gap censuses and gap ratio dynamics"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the report (or the cycle file, for `cycle`) here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Ceiling on materialized data, in bytes (suffixes K, M, G).
    #[arg(long, global = true, env = "GAPDYN_MEM_LIMIT", value_parser = parse_bytes)]
    mem_limit: Option<u64>,
    /// Odd numbers per sieve segment.
    #[arg(long, global = true, default_value_t = DEFAULT_SEGMENT_ODDS)]
    segment_size: usize,
    /// Permit ranges ending above 10^9.
    #[arg(long, global = true)]
    long: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Float,
    /// Double-double arithmetic.
    Compensated,
}

/// Parsed whole by one value parser; aliased so clap does not split it.
type GapSet = Vec<u32>;
type IntList = Vec<u64>;

#[derive(Subcommand)]
enum Command {
    /// Build the cycle of gaps G(p#).
    Cycle {
        #[arg(value_parser = parse::int)]
        p: u64,
        /// Emit the comma-separated text form instead of the binary file.
        #[arg(long)]
        text: bool,
    },
    /// Count gaps and constellations n_{g,j}(p) in G(p#).
    Census {
        #[arg(value_parser = parse::int)]
        p: u64,
        #[arg(long, value_parser = parse::gap_list, default_value = "2..32")]
        gaps: GapSet,
        /// Instead of counts, set the sum of each row over N_p(2) beside the
        /// product formula over odd prime divisors of g.
        #[arg(long)]
        asymptotic: bool,
    },
    /// Evolve the ratio vectors w_g from the census at p0 to pend.
    Evolve {
        #[arg(long, value_parser = parse::gap_list, default_value = "6")]
        gaps: GapSet,
        #[arg(long, value_parser = parse::int, default_value = "13")]
        p0: u64,
        #[arg(long, value_parser = parse::int)]
        pend: u64,
        #[arg(long, value_enum, default_value_t = Mode::Float)]
        mode: Mode,
        /// Report at these primes; defaults to powers of ten and pend.
        #[arg(long, value_parser = parse::int_list)]
        checkpoints: Option<IntList>,
    },
    /// Accumulate the transfer matrix over (p0, pend] and report a_j, beta_1j.
    Transfer {
        #[arg(long, value_parser = parse::int, default_value = "13")]
        p0: u64,
        #[arg(long, value_parser = parse::int)]
        pend: u64,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, value_enum, default_value_t = Mode::Float)]
        mode: Mode,
        #[arg(long, value_parser = parse::int_list)]
        checkpoints: Option<IntList>,
    },
    /// Print the eigenstructure R, L of the system matrices.
    Eigen {
        #[arg(long, default_value_t = 4)]
        dim: usize,
        /// Also print M(p) and its eigenvalues at this prime.
        #[arg(long, value_parser = parse::int)]
        prime: Option<u64>,
        /// Verify L·R = I (and R·Λ·L = M at --prime).
        #[arg(long)]
        check: bool,
    },
    /// Count gaps between consecutive primes in [lo, hi].
    PrimesCensus {
        #[arg(long, value_parser = parse::int)]
        lo: u64,
        #[arg(long, value_parser = parse::int)]
        hi: u64,
        #[arg(long, value_parser = parse::gap_list)]
        gaps: Option<GapSet>,
    },
    /// Set actual gap counts beside model predictions and literature values.
    Compare {
        #[arg(long, value_parser = parse::int, default_value = "1e6")]
        lo: u64,
        #[arg(long, value_parser = parse::int, default_value = "1e9")]
        hi: u64,
        #[arg(long, value_parser = parse::gap_list, default_value = "2..32")]
        gaps: GapSet,
        #[arg(long, value_parser = parse::int, default_value = "13")]
        p0: u64,
        /// Primes at which to evaluate w_{g,1}.
        #[arg(long, value_parser = parse::int_list, default_value = "45053")]
        primes: IntList,
        #[arg(long, value_enum, default_value_t = Mode::Float)]
        mode: Mode,
    },
}

/// Bad input detected by the front end itself.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn parse_bytes(s: &str) -> Result<u64, String> {
    let t = s.trim();
    let (num, mult) = match t.char_indices().find(|(_, c)| c.is_ascii_alphabetic()) {
        Some((i, _)) => {
            let mult = match t[i..].to_ascii_uppercase().as_str() {
                "B" => 1,
                "K" | "KB" | "KIB" => 1 << 10,
                "M" | "MB" | "MIB" => 1 << 20,
                "G" | "GB" | "GIB" => 1 << 30,
                "T" | "TB" | "TIB" => 1 << 40,
                other => return Err(format!("unknown size suffix `{other}`")),
            };
            (&t[..i], mult)
        }
        None => (t, 1),
    };
    let n = parse::int(num)?;
    n.checked_mul(mult)
        .ok_or_else(|| format!("`{s}` overflows 64 bits"))
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<UsageError>() {
            return EXIT_ARGUMENT;
        }
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::Capacity { .. } => EXIT_CAPACITY,
                Error::Io(_) | Error::Format(_) => EXIT_IO,
                _ => EXIT_ARGUMENT,
            };
        }
        if cause.is::<io::Error>() {
            return EXIT_IO;
        }
    }
    EXIT_OTHER
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_ARGUMENT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

struct Ctx {
    format: Format,
    out: Option<PathBuf>,
    cfg: SieveConfig,
    limits: CycleLimits,
    long: bool,
}

impl Ctx {
    fn require_long(&self, end: u64) -> anyhow::Result<()> {
        if end > LONG_THRESHOLD && !self.long {
            bail!(usage(format!(
                "range end {end} exceeds 10^9; pass --long to run it"
            )));
        }
        Ok(())
    }

    fn emit(&self, report: &Report) -> anyhow::Result<()> {
        let text = match self.format {
            Format::Csv => report.to_csv(),
            Format::Json => serde_json::to_string_pretty(&report.to_json()).map(|s| s + "\n")?,
            Format::Table => report.to_table(),
        };
        self.write(text.as_bytes())
    }

    fn write(&self, bytes: &[u8]) -> anyhow::Result<()> {
        match &self.out {
            Some(path) => {
                std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
            }
            None => {
                let mut stdout = io::stdout().lock();
                stdout.write_all(bytes)?;
                stdout.flush()?;
                Ok(())
            }
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let g = cli.global;
    let policy = configure_threads(g.threads)?;
    if g.segment_size < 64 {
        bail!(usage("--segment-size must be at least 64"));
    }
    let limits = match g.mem_limit {
        Some(bytes) => CycleLimits {
            max_gaps: bytes / 2,
        },
        None => CycleLimits::default(),
    };
    let ctx = Ctx {
        format: g.format,
        out: g.out,
        cfg: SieveConfig {
            segment_odds: g.segment_size,
            policy,
        },
        limits,
        long: g.long,
    };
    match cli.command {
        Command::Cycle { p, text } => cmd_cycle(&ctx, p, text),
        Command::Census {
            p,
            gaps,
            asymptotic,
        } => cmd_census(&ctx, p, &gaps, asymptotic),
        Command::Evolve {
            gaps,
            p0,
            pend,
            mode,
            checkpoints,
        } => cmd_evolve(&ctx, &gaps, p0, pend, mode, checkpoints),
        Command::Transfer {
            p0,
            pend,
            dim,
            mode,
            checkpoints,
        } => cmd_transfer(&ctx, p0, pend, dim, mode, checkpoints),
        Command::Eigen { dim, prime, check } => cmd_eigen(&ctx, dim, prime, check),
        Command::PrimesCensus { lo, hi, gaps } => cmd_primes_census(&ctx, lo, hi, gaps),
        Command::Compare {
            lo,
            hi,
            gaps,
            p0,
            primes,
            mode,
        } => cmd_compare(&ctx, lo, hi, &gaps, p0, &primes, mode),
    }
}

#[cfg(feature = "parallel")]
fn configure_threads(threads: Option<usize>) -> anyhow::Result<ExecPolicy> {
    match threads {
        Some(0) => Err(usage("--threads must be at least 1")),
        Some(1) => Ok(ExecPolicy::Sequential),
        Some(n) => {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()?;
            Ok(ExecPolicy::Parallel)
        }
        None => Ok(ExecPolicy::Parallel),
    }
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(threads: Option<usize>) -> anyhow::Result<ExecPolicy> {
    match threads {
        Some(0) => Err(usage("--threads must be at least 1")),
        Some(n) if n > 1 => {
            eprintln!("warning: built without parallel support; --threads {n} runs on one thread");
            Ok(ExecPolicy::Sequential)
        }
        _ => Ok(ExecPolicy::Sequential),
    }
}

fn cmd_cycle(ctx: &Ctx, p: u64, text: bool) -> anyhow::Result<()> {
    let cycle = cycle_for(p, &ctx.limits)?;
    let mut report = Report::new(
        format!("G({p}#)"),
        &[
            "p",
            "length",
            "sum",
            "first_gap",
            "last_gap",
            "twins",
            "symmetric",
        ],
    );
    report.push(vec![
        Cell::int(p),
        Cell::int(cycle.len() as u64),
        Cell::int(cycle.sum()),
        Cell::int(cycle.gaps()[0] as u64),
        Cell::int(*cycle.gaps().last().expect("nonempty") as u64),
        Cell::int(cycle.count_gap(2)),
        Cell::Text(cycle.is_symmetric().to_string()),
    ]);
    match &ctx.out {
        Some(path) => {
            let file =
                File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            if text {
                write_cycle_text(&cycle, &mut w)?;
            } else {
                write_cycle(&cycle, &mut w)?;
            }
            w.flush()
                .with_context(|| format!("writing {}", path.display()))?;
            print!("{}", render(ctx.format, &report)?);
        }
        None => {
            print!("{}", render(ctx.format, &report)?);
            if text {
                let mut stdout = io::stdout().lock();
                write_cycle_text(&cycle, &mut stdout)?;
                stdout.flush()?;
            }
        }
    }
    Ok(())
}

fn render(format: Format, report: &Report) -> anyhow::Result<String> {
    Ok(match format {
        Format::Csv => report.to_csv(),
        Format::Json => serde_json::to_string_pretty(&report.to_json())? + "\n",
        Format::Table => report.to_table(),
    })
}

fn stage_rows(ctx: &Ctx, p: u64, gaps: &[u32]) -> anyhow::Result<(GapCycle, Vec<CensusTable>)> {
    let max = *gaps.iter().max().expect("gap list is nonempty");
    let cycle = cycle_for(p, &ctx.limits)?;
    let rows = census_rows(&cycle, max, ctx.cfg.policy)?
        .into_iter()
        .filter(|r| gaps.contains(&r.gap))
        .collect();
    Ok((cycle, rows))
}

fn cmd_census(ctx: &Ctx, p: u64, gaps: &[u32], asymptotic: bool) -> anyhow::Result<()> {
    if asymptotic {
        return cmd_asymptotic(ctx, p, gaps);
    }
    let (_, rows) = stage_rows(ctx, p, gaps)?;
    let text = match ctx.format {
        Format::Csv => rows_to_csv(&rows),
        Format::Json => serde_json::to_string_pretty(&rows_to_json(&rows))? + "\n",
        Format::Table => rows_to_table(&rows),
    };
    ctx.write(text.as_bytes())
}

/// The sum of `w_g(p)` is stage-invariant only while `g < 2p'`, `p'` the
/// next prime; rows past that bound are flagged.
fn cmd_asymptotic(ctx: &Ctx, p: u64, gaps: &[u32]) -> anyhow::Result<()> {
    let w = initial_ratios(ctx, p, gaps)?;
    let bound = 2 * gapdyn_core::prime_engine::next_prime(p);
    let mut report = Report::new(
        format!("sum of w_g({p}) against the product over odd q | g of (q-1)/(q-2)"),
        &["gap", "row_sum", "formula", "equal", "within_bound"],
    );
    for v in &w {
        let sum = gapdyn_core::dynamics::asymptotic_ratio(v);
        let formula = asymptotic_formula(v.gap as u64)?;
        report.push(vec![
            Cell::int(v.gap as u64),
            Cell::Text(sum.to_string()),
            Cell::Text(formula.to_string()),
            Cell::Text((sum == formula).to_string()),
            Cell::Text(((v.gap as u64) < bound).to_string()),
        ]);
    }
    ctx.emit(&report)
}

/// Ratio vectors `w_g(p0) = n_{g,j}(p0) / n_{2,1}(p0)` read off the cycle.
fn initial_ratios(
    ctx: &Ctx,
    p0: u64,
    gaps: &[u32],
) -> anyhow::Result<Vec<RatioVector<BigRational>>> {
    if !is_prime(p0) {
        bail!(Error::NotPrime(p0));
    }
    let (cycle, rows) = stage_rows(ctx, p0, gaps)?;
    let twins = cycle.count_gap(2).into();
    rows.iter()
        .map(|r| Ok(RatioVector::from_census(r, &twins)?))
        .collect()
}

fn checkpoint_list(p0: u64, pend: u64, given: Option<Vec<u64>>) -> anyhow::Result<Vec<u64>> {
    let mut cps = match given {
        Some(list) => {
            if let Some(bad) = list.iter().find(|&&c| c <= p0 || c > pend) {
                bail!(usage(format!(
                    "checkpoint {bad} lies outside ({p0}, {pend}]"
                )));
            }
            list
        }
        None => decade_checkpoints(p0, pend),
    };
    if pend > p0 && !cps.contains(&pend) {
        cps.push(pend);
    }
    cps.sort_unstable();
    cps.dedup();
    Ok(cps)
}

fn check_span(ctx: &Ctx, p0: u64, pend: u64) -> anyhow::Result<()> {
    if pend < p0 {
        bail!(usage(format!("--pend {pend} precedes --p0 {p0}")));
    }
    ctx.require_long(pend)
}

fn cmd_evolve(
    ctx: &Ctx,
    gaps: &[u32],
    p0: u64,
    pend: u64,
    mode: Mode,
    checkpoints: Option<Vec<u64>>,
) -> anyhow::Result<()> {
    check_span(ctx, p0, pend)?;
    let cps = checkpoint_list(p0, pend, checkpoints)?;
    let w0 = initial_ratios(ctx, p0, gaps)?;
    let report = match mode {
        Mode::Exact => evolve_report::<BigRational>(ctx, p0, pend, &cps, &w0)?,
        Mode::Float => evolve_report::<f64>(ctx, p0, pend, &cps, &w0)?,
        Mode::Compensated => evolve_report::<DoubleDouble>(ctx, p0, pend, &cps, &w0)?,
    };
    ctx.emit(&report)
}

fn evolve_report<T: Scalar + Show>(
    ctx: &Ctx,
    p0: u64,
    pend: u64,
    cps: &[u64],
    w0: &[RatioVector<BigRational>],
) -> anyhow::Result<Report> {
    let dim = w0.iter().map(|w| w.dim()).max().unwrap_or(1).max(1);
    let (_, snaps) = transfer_with_checkpoints::<T>(p0, pend, dim, cps, &ctx.cfg)?;
    let start = TransferMatrix::<T>::identity(dim, p0);
    let mut header = vec!["gap".to_string(), "p".to_string()];
    header.extend((1..=dim).map(|j| format!("w_{j}")));
    let mut report = Report::with_header(format!("w_{{g,j}}(p) from p0 = {p0}"), header);
    for w in w0 {
        let entries: Vec<T> = w.entries.iter().map(T::from_rational).collect();
        for t in std::iter::once(&start).chain(snaps.iter()) {
            let mut row = vec![Cell::int(w.gap as u64), Cell::int(t.to)];
            row.extend(t.apply(&entries).iter().map(Show::cell));
            report.push(row);
        }
    }
    Ok(report)
}

fn cmd_transfer(
    ctx: &Ctx,
    p0: u64,
    pend: u64,
    dim: usize,
    mode: Mode,
    checkpoints: Option<Vec<u64>>,
) -> anyhow::Result<()> {
    check_span(ctx, p0, pend)?;
    if dim < 2 {
        bail!(usage("--dim must be at least 2"));
    }
    let cps = checkpoint_list(p0, pend, checkpoints)?;
    let report = match mode {
        Mode::Exact => transfer_report::<BigRational>(ctx, p0, pend, dim, &cps)?,
        Mode::Float => transfer_report::<f64>(ctx, p0, pend, dim, &cps)?,
        Mode::Compensated => transfer_report::<DoubleDouble>(ctx, p0, pend, dim, &cps)?,
    };
    ctx.emit(&report)
}

fn transfer_report<T: Scalar + Show>(
    ctx: &Ctx,
    p0: u64,
    pend: u64,
    dim: usize,
    cps: &[u64],
) -> anyhow::Result<Report> {
    let (_, snaps) = transfer_with_checkpoints::<T>(p0, pend, dim, cps, &ctx.cfg)?;
    let mut header = vec!["p".to_string()];
    header.extend((2..=dim).map(|j| format!("a_{j}")));
    header.extend((2..=dim).map(|j| format!("beta_1{j}")));
    let mut report = Report::with_header(format!("transfer over ({p0}, p]"), header);
    for t in &snaps {
        let mut row = vec![Cell::int(t.to)];
        row.extend((2..=dim).map(|j| t.a(j).cell()));
        row.extend((2..=dim).map(|j| t.beta(1, j).cell()));
        report.push(row);
    }
    Ok(report)
}

fn matrix_report(title: String, m: &DenseMatrix) -> Report {
    let n = m.dim();
    let mut header = vec!["i".to_string()];
    header.extend((1..=n).map(|j| format!("j={j}")));
    let mut report = Report::with_header(title, header);
    for i in 1..=n {
        let mut row = vec![Cell::int(i as u64)];
        row.extend(m.row(i).iter().map(|v| Cell::Text(v.to_string())));
        report.push(row);
    }
    report
}

fn cmd_eigen(ctx: &Ctx, dim: usize, prime: Option<u64>, check: bool) -> anyhow::Result<()> {
    if dim == 0 {
        bail!(usage("--dim must be at least 1"));
    }
    let eig = eigendecomposition(dim);
    let mut reports = vec![
        matrix_report("R (columns are right eigenvectors)".into(), &eig.r),
        matrix_report("L (rows are left eigenvectors)".into(), &eig.l),
    ];
    if let Some(p) = prime {
        if !is_prime(p) {
            bail!(Error::NotPrime(p));
        }
        reports.push(matrix_report(
            format!("M_{dim}({p})"),
            &system_dense(dim, p)?,
        ));
        let mut ev = Report::new(format!("eigenvalues at p = {p}"), &["j", "a_j", "approx"]);
        for (j, a) in eig.eigenvalues(p)?.iter().enumerate() {
            ev.push(vec![
                Cell::int(j as u64 + 1),
                Cell::Text(a.to_string()),
                Cell::Float(rational_to_f64(a)),
            ]);
        }
        reports.push(ev);
    }
    let mut notes = Vec::new();
    if check {
        if eig.l.mul(&eig.r) != DenseMatrix::identity(dim)
            || eig.r.mul(&eig.l) != DenseMatrix::identity(dim)
        {
            bail!("L·R = I fails at dimension {dim}");
        }
        notes.push("L·R = I verified".to_string());
        if let Some(p) = prime {
            if eig.reconstruct(p)? != system_dense(dim, p)? {
                bail!("R·Λ·L = M fails at dimension {dim}, p = {p}");
            }
            notes.push(format!("R·Λ·L = M_{dim}({p}) verified"));
        }
    }
    let text = match ctx.format {
        Format::Json => {
            let mut v = serde_json::json!({ "matrices": reports.iter().map(Report::to_json).collect::<Vec<_>>() });
            if check {
                v["checks"] = serde_json::json!(notes);
            }
            serde_json::to_string_pretty(&v)? + "\n"
        }
        Format::Csv | Format::Table => {
            let mut s = String::new();
            for r in &reports {
                s += &if ctx.format == Format::Csv {
                    format!("# {}\n{}", r.title, r.to_csv())
                } else {
                    r.to_table()
                };
                s.push('\n');
            }
            for n in &notes {
                s += n;
                s.push('\n');
            }
            s
        }
    };
    ctx.write(text.as_bytes())
}

fn cmd_primes_census(ctx: &Ctx, lo: u64, hi: u64, gaps: Option<Vec<u32>>) -> anyhow::Result<()> {
    ctx.require_long(hi)?;
    let range = PrimeRange::new(lo, hi)?;
    let census = gap_census(range, &ctx.cfg);
    match ctx.format {
        Format::Json if gaps.is_none() => {
            ctx.write((serde_json::to_string_pretty(&census.to_json())? + "\n").as_bytes())
        }
        Format::Csv if gaps.is_none() => ctx.write(census.to_csv().as_bytes()),
        _ => {
            let selected: Vec<u64> = match &gaps {
                Some(g) => g.iter().map(|&g| g as u64).collect(),
                None => census.counts.keys().copied().collect(),
            };
            let title = format!(
                "gaps between consecutive primes in [{lo}, {hi}]: {} primes, {} gaps",
                census.prime_count,
                census.total_gaps()
            );
            let mut report = Report::new(title, &["gap", "count", "ratio_to_2"]);
            for g in selected {
                let ratio = ratio_to_two(&census, g)
                    .map(Cell::Float)
                    .unwrap_or(Cell::Empty);
                report.push(vec![Cell::int(g), Cell::int(census.count(g)), ratio]);
            }
            ctx.emit(&report)
        }
    }
}

fn brent_hl() -> Vec<(u32, f64)> {
    BRENT_HL
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("gap"))
        .filter_map(|l| {
            let (g, r) = l.split_once(',')?;
            Some((g.trim().parse().ok()?, r.trim().parse().ok()?))
        })
        .collect()
}

fn cmd_compare(
    ctx: &Ctx,
    lo: u64,
    hi: u64,
    gaps: &[u32],
    p0: u64,
    primes: &[u64],
    mode: Mode,
) -> anyhow::Result<()> {
    ctx.require_long(hi)?;
    let mut primes = primes.to_vec();
    primes.sort_unstable();
    primes.dedup();
    if let Some(&last) = primes.last() {
        ctx.require_long(last)?;
    }
    if let Some(bad) = primes.iter().find(|&&p| p < p0 || !is_prime(p)) {
        bail!(usage(format!(
            "--primes entry {bad} must be a prime >= p0 = {p0}"
        )));
    }
    let range = PrimeRange::new(lo, hi)?;
    let census = gap_census(range, &ctx.cfg);
    let w0 = initial_ratios(ctx, p0, gaps)?;
    let predicted = match mode {
        Mode::Exact => predictions::<BigRational>(ctx, p0, &primes, &w0)?,
        Mode::Float => predictions::<f64>(ctx, p0, &primes, &w0)?,
        Mode::Compensated => predictions::<DoubleDouble>(ctx, p0, &primes, &w0)?,
    };
    let literature = brent_hl();

    let mut header: Vec<String> = ["gap", "actual", "actual_ratio", "brent_hl_ratio"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend(primes.iter().map(|p| format!("w_1({p})")));
    header.push("w_1(inf)".into());
    let title = format!(
        "actual gaps in [{lo}, {hi}] against w_{{g,1}} evolved from p0 = {p0}; \
         brent_hl_ratio is a literature value, echoed"
    );
    let mut report = Report::with_header(title, header);
    for (i, w) in w0.iter().enumerate() {
        let g = w.gap;
        let mut row = vec![Cell::int(g as u64)];
        if census.prime_count == 0 {
            row.extend([Cell::Empty, Cell::Empty]);
        } else {
            row.push(Cell::int(census.count(g as u64)));
            row.push(
                ratio_to_two(&census, g as u64)
                    .map(Cell::Float)
                    .unwrap_or(Cell::Empty),
            );
        }
        row.push(
            literature
                .iter()
                .find(|(lg, _)| *lg == g)
                .map(|&(_, r)| Cell::Float(r))
                .unwrap_or(Cell::Empty),
        );
        row.extend(predicted[i].iter().cloned());
        row.push(Cell::Float(rational_to_f64(&asymptotic_formula(g as u64)?)));
        report.push(row);
    }
    ctx.emit(&report)
}

/// `w_{g,1}` at each of `primes`, per gap.
fn predictions<T: Scalar + Show>(
    ctx: &Ctx,
    p0: u64,
    primes: &[u64],
    w0: &[RatioVector<BigRational>],
) -> anyhow::Result<Vec<Vec<Cell>>> {
    let dim = w0.iter().map(|w| w.dim()).max().unwrap_or(1).max(1);
    let pend = primes.last().copied().unwrap_or(p0);
    let (_, snaps) = transfer_with_checkpoints::<T>(p0, pend, dim, primes, &ctx.cfg)?;
    let at = |p: u64| -> TransferMatrix<T> {
        snaps
            .iter()
            .find(|t| t.to == p)
            .cloned()
            .unwrap_or_else(|| TransferMatrix::identity(dim, p0))
    };
    let transfers: Vec<TransferMatrix<T>> = primes.iter().map(|&p| at(p)).collect();
    Ok(w0
        .iter()
        .map(|w| {
            let entries: Vec<T> = w.entries.iter().map(T::from_rational).collect();
            transfers
                .iter()
                .map(|t| {
                    t.apply(&entries)
                        .first()
                        .map(Show::cell)
                        .unwrap_or(Cell::Float(0.0))
                })
                .collect()
        })
        .collect())
}

/// How a scalar appears in a report.
trait Show {
    fn cell(&self) -> Cell;
}

impl Show for f64 {
    fn cell(&self) -> Cell {
        Cell::Float(*self)
    }
}

impl Show for DoubleDouble {
    fn cell(&self) -> Cell {
        Cell::Text(self.to_string())
    }
}

impl Show for BigRational {
    fn cell(&self) -> Cell {
        Cell::Text(self.to_string())
    }
}

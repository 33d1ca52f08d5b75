//! `hurwitz`: tables of double Hurwitz numbers, single queries, identity
//! checks and brute-force comparison.
//!
//! Exit status: 0 on success, 1 when a check fails or the oracle disagrees,
//! 2 for usage, scale or I/O errors.

mod output;

use std::process::ExitCode;

use anyhow::bail;
use clap::{Args, Parser, Subcommand, ValueEnum};
use hurwitz_core::hurwitz::{build_tau, connected_series, cov_with_transpositions};
use hurwitz_core::integrable::{verify_hirota_for, verify_tau_n_for, verify_toda_for, verify_toda_specialized_for};
use hurwitz_core::oracle::{compare_all, oracle_rows};
use hurwitz_core::rational::int;
use hurwitz_core::{
    CharacterCache, HirotaPerturbation, HurwitzEngine, MonomialKey, OracleCaps, Partition, Side, TruncatedSeries,
    VerificationReport,
};

use output::{Format, Sink};

#[derive(Debug, Parser)]
#[command(name = "hurwitz", version, about = "Exact double Hurwitz numbers and Toda identities")]
struct Cli {
    /// Worker threads for the parallel parts (default: all cores).
    #[arg(long, global = true, env = "HURWITZ_JOBS")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Debug, Args)]
struct Orders {
    #[arg(long, default_value_t = 4)]
    dmax: u32,
    #[arg(long, default_value_t = 4)]
    bmax: u32,
}

#[derive(Debug, Args)]
struct Query {
    /// Ramification over 0, e.g. `2,1`.
    #[arg(long)]
    mu: Partition,
    /// Ramification over ∞.
    #[arg(long)]
    nu: Partition,
    /// Number of simple branch points.
    #[arg(short = 'b', default_value_t = 0)]
    b: u32,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// All connected Hur_{d,b}(μ,ν) with 1 ≤ d ≤ dmax, b ≤ bmax.
    Table {
        #[command(flatten)]
        orders: Orders,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// One connected double Hurwitz number.
    Double {
        #[command(flatten)]
        query: Query,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// One possibly disconnected count, by Burnside's formula and from τ.
    Cov {
        #[command(flatten)]
        query: Query,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check an identity satisfied by τ.
    Verify {
        #[arg(value_enum)]
        identity: Identity,
        #[command(flatten)]
        orders: Orders,
        /// Index m of the Hirota equation.
        #[arg(short = 'm', default_value_t = 0, allow_hyphen_values = true)]
        m: i32,
        /// Shift n of the τₙ map.
        #[arg(short = 'n', default_value_t = 1, allow_hyphen_values = true)]
        n: i64,
        /// First-order symbol for Hirota: `1` for s₁, `2'` for s'₂.
        #[arg(long)]
        sn: Option<Symbol>,
        /// Corrupt one coefficient of τ first; the check should then fail.
        #[arg(long)]
        corrupt_test: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compare character formulas with brute-force enumeration.
    Compare {
        #[command(flatten)]
        orders: Orders,
        #[arg(long, env = "HURWITZ_ORACLE_MAX_D", default_value_t = OracleCaps::default().max_d)]
        oracle_max_d: u32,
        #[arg(long, env = "HURWITZ_ORACLE_MAX_B", default_value_t = OracleCaps::default().max_b)]
        oracle_max_b: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Character table of S(d).
    Chartable {
        #[arg(short = 'd', default_value_t = 4)]
        d: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Dump the terms of τ or of log τ.
    Series {
        #[command(flatten)]
        orders: Orders,
        /// Dump H = log τ instead of τ.
        #[arg(long)]
        connected: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Identity {
    Toda,
    TodaSpecialized,
    Hirota,
    TauN,
}

#[derive(Clone, Copy, Debug)]
struct Symbol(HirotaPerturbation);

impl std::str::FromStr for Symbol {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (digits, side) = match s.strip_suffix('\'') {
            Some(rest) => (rest, Side::PPrime),
            None => (s, Side::P),
        };
        let index = digits.parse().map_err(|_| format!("expected an index like 1 or 2', got {s:?}"))?;
        Ok(Symbol(HirotaPerturbation::new(side, index)))
    }
}

/// A failure that maps to exit status 1 rather than 2.
#[derive(Debug)]
struct CheckFailed;

impl std::fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("check failed")
    }
}

impl std::error::Error for CheckFailed {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<CheckFailed>() => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Table { orders, output } => {
            let engine = HurwitzEngine::new();
            let records =
                if orders.dmax == 0 { Vec::new() } else { engine.tables(orders.dmax, orders.bmax)?.all_connected() };
            Sink::open(&output)?.records(output.format, &records)
        }
        Command::Double { query, output } => {
            let record = HurwitzEngine::new().double_hurwitz(query.b, &query.mu, &query.nu)?;
            Sink::open(&output)?.records(output.format, std::slice::from_ref(&record))
        }
        Command::Cov { query, output } => {
            let chars = CharacterCache::new();
            let burnside = cov_with_transpositions(&chars, query.b, &query.mu, &query.nu)?;
            let engine = HurwitzEngine::new();
            let record = engine.tables(query.mu.size(), query.b)?.disconnected_record(query.b, &query.mu, &query.nu)?;
            Sink::open(&output)?.records(output.format, std::slice::from_ref(&record))?;
            if record.value != burnside {
                eprintln!("Burnside sum {burnside} disagrees with the τ coefficient {}", record.value);
                return Err(CheckFailed.into());
            }
            Ok(())
        }
        Command::Verify { identity, orders, m, n, sn, corrupt_test, output } => {
            let report = verify(identity, &orders, m, n, sn.map(|s| s.0), corrupt_test)?;
            Sink::open(&output)?.report(output.format, &report)?;
            if report.pass() {
                Ok(())
            } else {
                Err(CheckFailed.into())
            }
        }
        Command::Compare { orders, oracle_max_d, oracle_max_b, output } => {
            let caps = OracleCaps { max_d: oracle_max_d, max_b: oracle_max_b };
            let chars = CharacterCache::new();
            let found = compare_all(&chars, orders.dmax, orders.bmax, caps)?;
            let mut sink = Sink::open(&output)?;
            match output.format {
                Format::Csv => sink.oracle_csv(&oracle_rows(orders.dmax, orders.bmax, caps)?)?,
                _ => sink.discrepancies(output.format, &found, orders.dmax, orders.bmax)?,
            }
            for d in &found {
                eprintln!("discrepancy: {d}");
            }
            if found.is_empty() {
                Ok(())
            } else {
                Err(CheckFailed.into())
            }
        }
        Command::Chartable { d, output } => {
            if d > 20 {
                bail!("character tables are limited to d ≤ 20");
            }
            let (classes, rows) = CharacterCache::new().table(d);
            Sink::open(&output)?.chartable(output.format, &classes, &rows)
        }
        Command::Series { orders, connected, output } => {
            let tau = build_tau(&CharacterCache::new(), orders.dmax, orders.bmax);
            let series = if connected { connected_series(&tau)? } else { tau };
            Sink::open(&output)?.series(output.format, &series)
        }
    }
}

/// The coefficient of `q p₁ p'₁`, which every check depends on.
fn corruption_key() -> MonomialKey {
    MonomialKey::new(1, 0, Partition::ones(1), Partition::ones(1))
}

fn verify(
    identity: Identity,
    orders: &Orders,
    m: i32,
    n: i64,
    sn: Option<HirotaPerturbation>,
    corrupt: bool,
) -> anyhow::Result<VerificationReport> {
    if orders.dmax == 0 {
        bail!("verify needs --dmax ≥ 1");
    }
    let chars = CharacterCache::new();
    let mut tau: TruncatedSeries = build_tau(&chars, orders.dmax, orders.bmax);
    if corrupt {
        tau = tau.perturbed(&corruption_key(), &int(1));
    }
    let mut report = match identity {
        Identity::Toda => verify_toda_for(&tau)?,
        Identity::TodaSpecialized => verify_toda_specialized_for(&tau)?,
        Identity::Hirota => verify_hirota_for(&tau, m, sn)?,
        Identity::TauN => verify_tau_n_for(&chars, &tau, n)?,
    };
    if corrupt {
        report.notes.push(format!("corrupted coefficient {} by +1", corruption_key()));
    }
    Ok(report)
}

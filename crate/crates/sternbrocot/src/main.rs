//! `sbq`: command-line front end for searches, approximations, bound checks and benchmarks.

use std::error::Error;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigUint;
use sternbrocot::bench::{
    create_file, emit_approx_csv, emit_csv, emit_plot_data, run_approx_bench, run_search_sweep, Algorithm,
    ApproxTarget, BenchConfig, OutputFormat, TrialPlan, DEFAULT_MAX_EXP, DEFAULT_SEED, DEFAULT_TRIALS,
};
use sternbrocot::bound_analysis::{
    measure_family, threshold, verify_tuple_inequality, worst_case_fraction, worst_pair, ScanMode,
};
use sternbrocot::exact_arith::fraction_to_sb_path;
use sternbrocot::km_search::km_search;
use sternbrocot::real_approx::{approximate_unknown, best_approx_certified};
use sternbrocot::sb_search::{rational_search_bounded, rational_search_unbounded};
use sternbrocot::{Fraction, RationalOracle, RealKind, RealOracle};

type Result<T> = std::result::Result<T, Box<dyn Error>>;

#[derive(Parser)]
#[command(name = "sbq", version, about = "Rational search and approximation from comparison queries")]
struct Cli {
    /// TOML file presetting any of the flags below.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Largest exponent e of n = 10^e for `bench`.
    #[arg(long, global = true)]
    max_exp: Option<u32>,
    /// Output file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Identify a hidden rational in (0, 1) by compressed tree search.
    Search {
        fraction: Fraction,
        /// Denominator bound; probes never exceed it.
        #[arg(long)]
        bound: Option<BigUint>,
    },
    /// Identify a hidden rational in [0, 1] with denominator ≤ n by grid search.
    Km {
        fraction: Fraction,
        #[arg(long)]
        n: BigUint,
    },
    /// Least-denominator fraction within δ of a hidden real (pi, e, sqrt:D, or p/q).
    Approx {
        target: RealKind,
        /// Radius, e.g. 1e-5 or 1/1000.
        #[arg(long, value_parser = parse_decimal)]
        delta: Fraction,
        #[arg(long)]
        precision_digits: Option<u32>,
    },
    /// Seeded query-count benchmark for n = 10^1 … 10^max-exp.
    Bench {
        #[arg(long, value_delimiter = ',', default_values = ["km", "csb"])]
        algorithms: Vec<BenchAlgorithm>,
        /// Also write (log10_n, series, value) rows here.
        #[arg(long)]
        plot_data: Option<PathBuf>,
    },
    /// Approximate the reference constants for δ = 10^-1 … 10^-delta-max.
    ApproxBench {
        #[arg(long, value_delimiter = ',', default_values = ["pi", "e", "sqrt2", "sqrt5"])]
        constants: Vec<ApproxTarget>,
        #[arg(long, default_value_t = 15)]
        delta_max: u32,
        #[arg(long, default_value_t = 1)]
        repeats: u32,
    },
    /// Exhaustively check the per-run query inequality, or the full suite when --vars is absent.
    VerifyBounds {
        #[arg(long)]
        vars: Option<usize>,
        #[arg(long)]
        top: Option<u64>,
        #[arg(long, value_parser = parse_decimal, default_value = "2.5849")]
        constant: Fraction,
        #[arg(long, value_enum, default_value = "step")]
        mode: Mode,
        /// Write violating tuples as CSV.
        #[arg(long)]
        violations_csv: Option<PathBuf>,
    },
    /// Pair (a, b) ≤ max maximizing the query coefficient of (L^a R^b)^k.
    WorstPair {
        #[arg(long, default_value_t = 1000)]
        max: u64,
    },
    /// The fraction with path (L^a R^b)^k, optionally searched for.
    WorstCase {
        #[arg(long, default_value_t = 8)]
        a: u64,
        #[arg(long, default_value_t = 1)]
        b: u64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        run_search: bool,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum BenchAlgorithm {
    Km,
    Csb,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Mode {
    Base,
    Step,
}

impl From<Mode> for ScanMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Base => ScanMode::BaseCase,
            Mode::Step => ScanMode::InductiveStep,
        }
    }
}

fn parse_decimal(s: &str) -> std::result::Result<Fraction, String> {
    Fraction::parse_decimal(s).map_err(|e| e.to_string())
}

/// Flags merged over the config file.
struct Settings {
    seed: u64,
    trials: u64,
    max_exp: u32,
    out: Option<PathBuf>,
    format: Option<OutputFormat>,
    precision_digits: u32,
}

impl Settings {
    fn new(cli: &Cli) -> Result<Self> {
        let cfg = match &cli.config {
            Some(p) => BenchConfig::load(p)?,
            None => BenchConfig::default(),
        };
        Ok(Self {
            seed: cli.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED),
            trials: cli.trials.or(cfg.trials).unwrap_or(DEFAULT_TRIALS),
            max_exp: cli.max_exp.or(cfg.max_exp).unwrap_or(DEFAULT_MAX_EXP),
            out: cli.out.clone().or(cfg.out.clone()),
            format: cli.format.or(cfg.format),
            precision_digits: cfg.precision_digits(),
        })
    }

    fn writer(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(p) => Box::new(create_file(p)?),
            None => Box::new(io::stdout().lock()),
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn unit_open(f: &Fraction) -> Result<()> {
    if f.is_zero() || f >= &Fraction::one() {
        return Err(format!("{f} is not strictly between 0 and 1").into());
    }
    Ok(())
}

/// Runs one subcommand; `Ok(false)` means a correctness check failed.
fn run(cli: Cli) -> Result<bool> {
    let s = Settings::new(&cli)?;
    let mut out = s.writer()?;
    match cli.command {
        Command::Search { fraction, bound } => {
            unit_open(&fraction)?;
            let mut oracle = RationalOracle::new(fraction.clone());
            let (found, trace) = match &bound {
                Some(n) => rational_search_bounded(&mut oracle, n)?,
                None => rational_search_unbounded(&mut oracle)?,
            };
            match s.format {
                Some(OutputFormat::Csv) => write!(out, "{}", trace.to_csv())?,
                Some(OutputFormat::Json) => {
                    let v = serde_json::json!({ "fraction": found, "path": fraction_to_sb_path(&found)?.to_string(), "trace": trace });
                    writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
                }
                None => {
                    writeln!(out, "fraction: {found}")?;
                    writeln!(out, "path:     {}", fraction_to_sb_path(&found)?)?;
                    writeln!(out, "queries:  {}", trace.total_queries)?;
                }
            }
            Ok(found == fraction)
        }
        Command::Km { fraction, n } => {
            if fraction.is_infinite() || fraction > Fraction::one() {
                return Err(format!("{fraction} is not in [0, 1]").into());
            }
            let mut oracle = RationalOracle::new(fraction.clone());
            let (found, queries) = km_search(&mut oracle, &n)?;
            match s.format {
                Some(OutputFormat::Json) => {
                    writeln!(out, "{}", serde_json::json!({ "fraction": found, "queries": queries }))?
                }
                _ => writeln!(out, "fraction: {found}\nqueries:  {queries}")?,
            }
            Ok(found == fraction)
        }
        Command::Approx { target, delta, precision_digits } => {
            let mut oracle = RealOracle::with_budget(target.clone(), precision_digits.unwrap_or(s.precision_digits));
            let a = approximate_unknown(&mut oracle, &delta)?;
            let known = best_approx_certified(&target, &delta)?;
            match s.format {
                Some(OutputFormat::Json) => writeln!(
                    out,
                    "{}",
                    serde_json::json!({ "target": target.to_string(), "delta": delta, "fraction": a.fraction, "queries": a.queries, "known": known })
                )?,
                _ => writeln!(out, "fraction: {}\nqueries:  {}\nknown:    {known}", a.fraction, a.queries)?,
            }
            Ok(a.fraction == known)
        }
        Command::Bench { algorithms, plot_data } => {
            let algs: Vec<Algorithm> = algorithms
                .iter()
                .map(|a| match a {
                    BenchAlgorithm::Km => Algorithm::Km,
                    BenchAlgorithm::Csb => Algorithm::Csb,
                })
                .collect();
            let plan = TrialPlan { trials: s.trials, seed: s.seed };
            let records = run_search_sweep(&plan, s.max_exp, &algs)?;
            match s.format.unwrap_or_default() {
                OutputFormat::Csv => emit_csv(&records, &mut out)?,
                OutputFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&records)?)?,
            }
            if let Some(p) = plot_data {
                emit_plot_data(&records, create_file(&p)?)?;
            }
            let mut ok = true;
            for r in &records {
                if let Err(why) = r.check() {
                    eprintln!("FAIL {why}");
                    ok = false;
                }
            }
            Ok(ok)
        }
        Command::ApproxBench { constants, delta_max, repeats } => {
            let cells = run_approx_bench(&constants, 1..=delta_max, repeats, s.precision_digits)?;
            match s.format.unwrap_or_default() {
                OutputFormat::Csv => emit_approx_csv(&cells, &mut out)?,
                OutputFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&cells)?)?,
            }
            let bad: Vec<_> = cells.iter().filter(|c| !c.fraction_ok()).collect();
            for c in &bad {
                eprintln!("FAIL {} 1e-{}: got {}, known {}", c.constant, c.delta_exponent, c.fraction, c.known);
            }
            let q_match = cells.iter().filter(|c| c.queries_ok()).count();
            eprintln!("query counts matching the reference: {q_match}/{}", cells.len());
            Ok(bad.is_empty())
        }
        Command::VerifyBounds { vars, top, constant, mode, violations_csv } => {
            let plans: Vec<(usize, u64, ScanMode)> = match vars {
                Some(k) => {
                    let mode = ScanMode::from(mode);
                    let top = match top {
                        Some(t) => t,
                        None => threshold(&constant, k as u32, mode)?,
                    };
                    vec![(k, top, mode)]
                }
                None => {
                    let mut v = Vec::new();
                    for k in 1..=4 {
                        v.push((k, threshold(&constant, k as u32, ScanMode::BaseCase)?, ScanMode::BaseCase));
                    }
                    v.push((4, threshold(&constant, 4, ScanMode::InductiveStep)?, ScanMode::InductiveStep));
                    v
                }
            };
            let mut ok = true;
            let mut violations = Vec::new();
            for (k, top, mode) in plans {
                let r = verify_tuple_inequality(k, top, &constant, mode)?;
                writeln!(
                    out,
                    "{mode} vars={k} top={top} C={}: {} tuples, {} violations, argmax {:?} (critical C = {})",
                    constant,
                    r.tuples_checked,
                    r.violations.len(),
                    r.argmax_tuple,
                    r.critical_constant().to_decimal_directed(6, true)
                )?;
                ok &= r.holds();
                violations.extend(r.violations.into_iter().map(|t| (mode, t)));
            }
            if let Some(p) = violations_csv {
                let mut w = csv::Writer::from_writer(create_file(&p)?);
                w.write_record(["mode", "x1", "x2", "x3", "x4"])?;
                for (mode, t) in violations {
                    let mut row = vec![mode.to_string()];
                    row.extend((0..4).map(|i| t.get(i).map(u64::to_string).unwrap_or_default()));
                    w.write_record(row)?;
                }
                w.flush()?;
            }
            Ok(ok)
        }
        Command::WorstPair { max } => {
            let w = worst_pair(max);
            writeln!(out, "a={} b={} coefficient={}", w.a, w.b, w.coefficient.to_decimal(20))?;
            Ok(true)
        }
        Command::WorstCase { a, b, k, run_search } => {
            if a == 0 || b == 0 || k == 0 {
                return Err("a, b and k must be positive".into());
            }
            if run_search {
                let m = measure_family(a, b, k)?;
                writeln!(out, "fraction: {}\nqueries:  {}\nratio:    {:.6}", m.fraction, m.queries, m.ratio)?;
            } else {
                writeln!(out, "{}", worst_case_fraction(a, b, k))?;
            }
            Ok(true)
        }
    }
}

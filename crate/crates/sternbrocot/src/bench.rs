//! Seeded benchmark harness.
//!
//! Search benchmarks draw `b` uniformly from `[2, n]`, then `a` uniformly from
//! `[1, b)`, without reducing `a/b`; every algorithm sees the same draws and
//! its answer is checked against the reduced value. Approximation benchmarks
//! run the unknown-value search on the four reference constants for
//! `δ = 10⁻¹ … 10⁻¹⁵` and check the result against the known-value routine and
//! the published reference tables.

use std::fmt;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_bigint::{BigUint, RandBigInt};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bound_analysis::log2_biguint;
use crate::exact_arith::Fraction;
use crate::km_search::{grid_cells, km_search};
use crate::oracles::{ComparisonOracle, RationalOracle, RealKind, RealOracle, DEFAULT_PRECISION_DIGITS};
use crate::real_approx::{approximate_unknown, best_approx_certified, ApproxError};
use crate::sb_search::rational_search_unbounded;

/// The only generator the harness implements; named in config files.
pub const RNG_NAME: &str = "chacha8";
pub const DEFAULT_TRIALS: u64 = 1000;
pub const DEFAULT_MAX_EXP: u32 = 25;
pub const DEFAULT_SEED: u64 = 2024;
/// Constant of the upper bound on search queries, `c·log₂ n + 2`.
pub const ENVELOPE_CONSTANT: f64 = 2.5849;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("write failed: {0}")]
    Write(#[from] io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("config {path}: {message}")]
    Config { path: PathBuf, message: String },
    #[error("n must be at least 2, got {0}")]
    InvalidN(BigUint),
    #[error("trials must be positive")]
    NoTrials,
    #[error(transparent)]
    Approx(#[from] ApproxError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Km,
    Csb,
    Approx,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Km => "km",
            Algorithm::Csb => "csb",
            Algorithm::Approx => "approx",
        })
    }
}

/// Seeded trial generator for one value of `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialPlan {
    pub trials: u64,
    pub seed: u64,
}

impl Default for TrialPlan {
    fn default() -> Self {
        Self { trials: DEFAULT_TRIALS, seed: DEFAULT_SEED }
    }
}

impl TrialPlan {
    /// The `(a, b)` draws for bound `n`; the generator is reseeded per call.
    pub fn sample(&self, n: &BigUint) -> Vec<(BigUint, BigUint)> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let (one, two, top) = (BigUint::from(1u32), BigUint::from(2u32), n + 1u32);
        (0..self.trials)
            .map(|_| {
                let b = rng.gen_biguint_range(&two, &top);
                let a = rng.gen_biguint_range(&one, &b);
                (a, b)
            })
            .collect()
    }
}

/// Aggregate of one algorithm over one plan.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct BenchRecord {
    /// `n` for search benchmarks.
    #[serde(serialize_with = "display")]
    pub n: BigUint,
    /// `e` when `n = 10^e`.
    pub n_exponent: Option<u32>,
    pub algorithm: Algorithm,
    pub max_queries: u64,
    pub avg_queries: f64,
    pub avg_time_s: f64,
    pub trials: u64,
    pub seed: u64,
    /// First correctness failure; the record stops at that trial.
    pub failure: Option<String>,
}

fn display<T: fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl BenchRecord {
    /// Query bound every record must respect: `2.5849·log₂ n + 2` for the
    /// compressed search, `⌈log₂(2n²)⌉` for the grid search.
    pub fn envelope(&self) -> f64 {
        match self.algorithm {
            Algorithm::Csb => ENVELOPE_CONSTANT * log2_biguint(&self.n) + 2.0,
            _ => grid_cells(&self.n).bits() as f64 - f64::from(grid_cells(&self.n).count_ones() == 1),
        }
    }

    /// Correctness and envelope check; `Err` carries a human-readable reason.
    pub fn check(&self) -> Result<(), String> {
        if let Some(f) = &self.failure {
            return Err(f.clone());
        }
        if self.max_queries as f64 > self.envelope() {
            return Err(format!(
                "{} n={}: max_queries {} exceeds envelope {:.3}",
                self.algorithm,
                self.n,
                self.max_queries,
                self.envelope()
            ));
        }
        Ok(())
    }
}

#[derive(Default)]
struct Tally {
    max: u64,
    sum: u64,
    time: f64,
    done: u64,
    failure: Option<String>,
}

impl Tally {
    fn add(&mut self, queries: u64, secs: f64) {
        self.max = self.max.max(queries);
        self.sum += queries;
        self.time += secs;
        self.done += 1;
    }

    fn into_record(self, n: &BigUint, n_exponent: Option<u32>, algorithm: Algorithm, seed: u64) -> BenchRecord {
        let d = self.done.max(1) as f64;
        BenchRecord {
            n: n.clone(),
            n_exponent,
            algorithm,
            max_queries: self.max,
            avg_queries: self.sum as f64 / d,
            avg_time_s: self.time / d,
            trials: self.done,
            seed,
            failure: self.failure,
        }
    }
}

/// Runs each of `algorithms` (search algorithms only) on the same draws.
pub fn run_search_bench(
    plan: &TrialPlan,
    n: &BigUint,
    n_exponent: Option<u32>,
    algorithms: &[Algorithm],
) -> Result<Vec<BenchRecord>, BenchError> {
    if n < &BigUint::from(2u32) {
        return Err(BenchError::InvalidN(n.clone()));
    }
    if plan.trials == 0 {
        return Err(BenchError::NoTrials);
    }
    let draws = plan.sample(n);
    let mut tallies: Vec<(Algorithm, Tally)> = algorithms.iter().map(|&a| (a, Tally::default())).collect();
    for (a, b) in &draws {
        let hidden = Fraction::new(a.clone(), b.clone()).expect("b ≥ 2");
        for (alg, tally) in tallies.iter_mut().filter(|(_, t)| t.failure.is_none()) {
            let mut oracle = RationalOracle::new(hidden.clone());
            let start = Instant::now();
            let found = match alg {
                Algorithm::Km => km_search(&mut oracle, n).map(|r| r.0),
                Algorithm::Csb => rational_search_unbounded(&mut oracle).map(|r| r.0),
                Algorithm::Approx => panic!("approx is benchmarked by run_approx_bench"),
            };
            let secs = start.elapsed().as_secs_f64();
            match found {
                Ok(f) if f == hidden => tally.add(oracle.read_count(), secs),
                Ok(f) => tally.failure = Some(format!("{alg} on {a}/{b} returned {f}")),
                Err(e) => tally.failure = Some(format!("{alg} on {a}/{b} failed: {e}")),
            }
        }
    }
    Ok(tallies.into_iter().map(|(alg, t)| t.into_record(n, n_exponent, alg, plan.seed)).collect())
}

/// `run_search_bench` for `n = 10^1 … 10^max_exp`.
pub fn run_search_sweep(plan: &TrialPlan, max_exp: u32, algorithms: &[Algorithm]) -> Result<Vec<BenchRecord>, BenchError> {
    let mut out = Vec::new();
    for e in 1..=max_exp {
        let n = BigUint::from(10u32).pow(e);
        out.extend(run_search_bench(plan, &n, Some(e), algorithms)?);
    }
    Ok(out)
}

/// The four reference constants of the approximation tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ApproxTarget {
    Pi,
    E,
    Sqrt2,
    Sqrt5,
}

impl ApproxTarget {
    pub const ALL: [ApproxTarget; 4] = [ApproxTarget::Pi, ApproxTarget::E, ApproxTarget::Sqrt2, ApproxTarget::Sqrt5];

    pub fn kind(self) -> RealKind {
        match self {
            ApproxTarget::Pi => RealKind::Pi,
            ApproxTarget::E => RealKind::E,
            ApproxTarget::Sqrt2 => RealKind::Sqrt(2),
            ApproxTarget::Sqrt5 => RealKind::Sqrt(5),
        }
    }

    fn column(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ApproxTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ApproxTarget::Pi => "pi",
            ApproxTarget::E => "e",
            ApproxTarget::Sqrt2 => "sqrt2",
            ApproxTarget::Sqrt5 => "sqrt5",
        })
    }
}

impl std::str::FromStr for ApproxTarget {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "pi" => ApproxTarget::Pi,
            "e" => ApproxTarget::E,
            "sqrt2" => ApproxTarget::Sqrt2,
            "sqrt5" => ApproxTarget::Sqrt5,
            _ => return Err(format!("unknown constant {s:?}; expected pi, e, sqrt2 or sqrt5")),
        })
    }
}

/// Published best approximations for `δ = 10⁻¹ … 10⁻¹⁵` (rows), in the
/// column order π, e, √2, √5.
pub const REFERENCE_FRACTIONS: [[&str; 4]; 15] = [
    ["16/5", "8/3", "3/2", "7/3"],
    ["22/7", "19/7", "17/12", "29/13"],
    ["201/64", "87/32", "41/29", "38/17"],
    ["333/106", "193/71", "99/70", "161/72"],
    ["355/113", "1071/394", "577/408", "682/305"],
    ["355/113", "2721/1001", "1393/985", "2207/987"],
    ["75948/24175", "15062/5541", "3363/2378", "9349/4181"],
    ["100798/32085", "23225/8544", "19601/13860", "12238/5473"],
    ["103993/33102", "49171/18089", "47321/33461", "51841/23184"],
    ["312689/99532", "419314/154257", "114243/80782", "219602/98209"],
    ["833719/265381", "1084483/398959", "275807/195025", "710647/317811"],
    ["4272943/1360120", "1084483/398959", "1607521/1136689", "3010349/1346269"],
    ["5419351/1725033", "12496140/4597073", "3880899/2744210", "3940598/1762289"],
    ["58466453/18610450", "28245729/10391023", "9369319/6625109", "16692641/7465176"],
    ["80143857/25510582", "28245729/10391023", "54608393/38613965", "70711162/31622993"],
];

/// Published query counts for the same cells.
pub const REFERENCE_QUERIES: [[u64; 4]; 15] = [
    [14, 12, 6, 11],
    [11, 13, 10, 16],
    [24, 17, 13, 16],
    [24, 17, 14, 17],
    [19, 26, 18, 24],
    [19, 27, 21, 27],
    [47, 34, 22, 32],
    [47, 34, 26, 32],
    [47, 33, 29, 33],
    [39, 45, 30, 40],
    [46, 45, 33, 43],
    [50, 45, 37, 48],
    [47, 54, 38, 48],
    [60, 54, 41, 49],
    [60, 63, 45, 56],
];

pub fn reference_fraction(target: ApproxTarget, delta_exponent: u32) -> Option<Fraction> {
    let row = REFERENCE_FRACTIONS.get(delta_exponent.checked_sub(1)? as usize)?;
    Some(row[target.column()].parse().expect("well-formed table"))
}

pub fn reference_queries(target: ApproxTarget, delta_exponent: u32) -> Option<u64> {
    let row = REFERENCE_QUERIES.get(delta_exponent.checked_sub(1)? as usize)?;
    Some(row[target.column()])
}

/// One `(constant, δ)` cell.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ApproxCell {
    pub constant: ApproxTarget,
    pub delta_exponent: u32,
    pub fraction: Fraction,
    pub queries: u64,
    pub avg_time_s: f64,
    /// Known-value answer for the same constant and radius.
    pub known: Fraction,
    pub reference_fraction: Option<Fraction>,
    pub reference_queries: Option<u64>,
}

impl ApproxCell {
    /// Fraction agrees with the known-value routine and the reference table.
    pub fn fraction_ok(&self) -> bool {
        self.fraction == self.known && self.reference_fraction.as_ref().is_none_or(|r| r == &self.fraction)
    }

    pub fn queries_ok(&self) -> bool {
        self.reference_queries.is_none_or(|r| r == self.queries)
    }
}

/// Runs every `(constant, δ)` cell `repeats` times (queries are deterministic;
/// only the time is averaged).
pub fn run_approx_bench(
    constants: &[ApproxTarget],
    delta_exponents: std::ops::RangeInclusive<u32>,
    repeats: u32,
    precision_digits: u32,
) -> Result<Vec<ApproxCell>, BenchError> {
    let repeats = repeats.max(1);
    let mut cells = Vec::new();
    for k in delta_exponents {
        let delta = Fraction::pow10_neg(k);
        for &c in constants {
            let mut result = None;
            let mut time = 0.0;
            for _ in 0..repeats {
                let mut oracle = RealOracle::with_budget(c.kind(), precision_digits);
                let start = Instant::now();
                let a = approximate_unknown(&mut oracle, &delta)?;
                time += start.elapsed().as_secs_f64();
                result = Some(a);
            }
            let a = result.expect("repeats ≥ 1");
            cells.push(ApproxCell {
                constant: c,
                delta_exponent: k,
                fraction: a.fraction,
                queries: a.queries,
                avg_time_s: time / f64::from(repeats),
                known: best_approx_certified(&c.kind(), &delta)?,
                reference_fraction: reference_fraction(c, k),
                reference_queries: reference_queries(c, k),
            });
        }
    }
    Ok(cells)
}

/// Default approximation plan: all constants, `δ = 10⁻¹ … 10⁻¹⁵`.
pub fn run_default_approx_bench(precision_digits: u32) -> Result<Vec<ApproxCell>, BenchError> {
    run_approx_bench(&ApproxTarget::ALL, 1..=15, 1, precision_digits)
}

pub const CSV_HEADER: [&str; 7] = ["n", "algorithm", "max_queries", "avg_queries", "avg_time_s", "trials", "seed"];

/// Writes search records as CSV with the fixed [`CSV_HEADER`].
pub fn emit_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.n.to_string(),
            r.algorithm.to_string(),
            r.max_queries.to_string(),
            r.avg_queries.to_string(),
            format!("{:.3e}", r.avg_time_s),
            r.trials.to_string(),
            r.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `(log10_n, series, value)` rows: `<alg>_max` and `<alg>_avg` per record.
pub fn emit_plot_data<W: Write>(records: &[BenchRecord], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["log10_n", "series", "value"])?;
    for r in records {
        let x = match r.n_exponent {
            Some(e) => e.to_string(),
            None => format!("{:.6}", log2_biguint(&r.n) / std::f64::consts::LOG2_10),
        };
        w.write_record([x.clone(), format!("{}_max", r.algorithm), r.max_queries.to_string()])?;
        w.write_record([x, format!("{}_avg", r.algorithm), r.avg_queries.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes approximation cells as CSV.
pub fn emit_approx_csv<W: Write>(cells: &[ApproxCell], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "constant",
        "delta_exponent",
        "fraction",
        "queries",
        "avg_time_s",
        "known",
        "reference_fraction",
        "reference_queries",
    ])?;
    for c in cells {
        w.write_record([
            c.constant.to_string(),
            c.delta_exponent.to_string(),
            c.fraction.to_string(),
            c.queries.to_string(),
            format!("{:.3e}", c.avg_time_s),
            c.known.to_string(),
            c.reference_fraction.as_ref().map(ToString::to_string).unwrap_or_default(),
            c.reference_queries.map(|q| q.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Creates `path` for writing, keeping the path in any error.
pub fn create_file(path: &Path) -> Result<File, BenchError> {
    File::create(path).map_err(|source| BenchError::Io { path: path.to_owned(), source })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Harness settings; every key is optional and overridden by command-line flags.
///
/// ```toml
/// seed = 2024
/// trials = 1000
/// max_exp = 25
/// out = "bench.csv"
/// format = "csv"            # or "json"
/// precision_digits = 10000
/// rng = "chacha8"
/// ```
#[derive(Debug, Clone, Default, PartialEq, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub max_exp: Option<u32>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub precision_digits: Option<u32>,
    pub rng: Option<String>,
}

impl BenchConfig {
    pub fn load(path: &Path) -> Result<Self, BenchError> {
        let text = std::fs::read_to_string(path).map_err(|source| BenchError::Io { path: path.to_owned(), source })?;
        Self::parse(&text).map_err(|message| BenchError::Config { path: path.to_owned(), message })
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let cfg: Self = toml::from_str(text).map_err(|e| e.to_string())?;
        match cfg.rng.as_deref() {
            None | Some(RNG_NAME) => Ok(cfg),
            Some(other) => Err(format!("unsupported rng {other:?}; only {RNG_NAME:?} is implemented")),
        }
    }

    pub fn precision_digits(&self) -> u32 {
        self.precision_digits.unwrap_or(DEFAULT_PRECISION_DIGITS)
    }
}

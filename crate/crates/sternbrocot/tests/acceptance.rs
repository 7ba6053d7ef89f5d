//! Acceptance criteria, one line each:
//! `[PASS] criterion N: …` or `[FAIL] criterion N: …`, followed by detail lines.
//! The process exits non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use num_bigint::BigUint;
use sternbrocot::bench::{run_search_bench, Algorithm, TrialPlan};
use sternbrocot::bound_analysis::{
    comparisons_coefficient, measure_family, threshold, verify_tuple_inequality, worst_pair, BoundConstant, ScanMode,
};
use sternbrocot::exact_arith::{cf_to_sb_path, fraction_to_sb_path, sb_path_to_fraction, to_continued_fraction};
use sternbrocot::km_search::km_search;
use sternbrocot::real_approx::{approximate_unknown, best_approx_known};
use sternbrocot::sb_search::rational_search_unbounded;
use sternbrocot::{Fraction, RationalOracle, RealKind, RealOracle};

// Tolerances and targets.
const ENVELOPE_C: f64 = 2.5849;
const ENVELOPE_SLACK: f64 = 2.0;
const RATIO_SLACK: f64 = 0.25;
const LOWER_BOUND_MIN: f64 = 2.41;
const LOWER_BOUND_LIMIT: f64 = 2.4189;
const LOWER_BOUND_TOL: f64 = 0.01;
const KM_AVG_TOL: f64 = 0.03;
const CSB_AVG_TOL: f64 = 0.08;
const STAT_SEED: u64 = 2024;
const STAT_TRIALS: u64 = 1000;
const EQUIV_TARGETS: usize = 10_000;
const EQUIV_SEED: u64 = 0x5eed;

// Published reference values, rows δ = 10⁻¹ … 10⁻¹⁵, columns π, e, √2, √5.
const TABLE_FRACTIONS: [[&str; 4]; 15] = [
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
const TABLE_QUERIES: [[u64; 4]; 15] = [
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
const CONSTANTS: [(&str, RealKind); 4] =
    [("pi", RealKind::Pi), ("e", RealKind::E), ("sqrt2", RealKind::Sqrt(2)), ("sqrt5", RealKind::Sqrt(5))];

/// Outcome of one criterion: a summary plus detail lines.
struct Outcome {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, summary: impl Into<String>, details: Vec<String>) -> Self {
        Self { pass, summary: summary.into(), details }
    }
}

fn timed(limit: Duration, elapsed: Duration, what: &str) -> String {
    let verdict = if elapsed <= limit { "within" } else { "OVER" };
    format!("{what}: {:.2}s ({verdict} target {}s)", elapsed.as_secs_f64(), limit.as_secs())
}

/// Exhaustive exactness of both searches for every reduced a/b, b ≤ 500.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    let n = BigUint::from(500u32);
    let (mut count, mut bad) = (0u64, Vec::new());
    for (a, b) in reduced_unit_fractions(500) {
        count += 1;
        let f = frac(a, b);
        let (csb, _) = rational_search_unbounded(&mut RationalOracle::new(f.clone())).unwrap();
        let (km, _) = km_search(&mut RationalOracle::new(f.clone()), &n).unwrap();
        if csb != f || km != f {
            bad.push(format!("{f}: csb {csb}, km {km}"));
        }
    }
    let elapsed = start.elapsed();
    let pass = bad.is_empty() && count == 76_115 && elapsed <= Duration::from_secs(60);
    let mut details = vec![format!("{count} fractions (expected 76115)"), timed(Duration::from_secs(60), elapsed, "sweep")];
    details.extend(bad.into_iter().take(10));
    Outcome::new(pass, "both searches exact on every reduced a/b with b ≤ 500", details)
}

/// Query envelope over b ≤ 500, worst ratio over b ≤ 2000, and the lower-bound witness.
fn criterion_2() -> Outcome {
    let mut violations = Vec::new();
    let mut worst: (f64, String) = (0.0, String::new());
    for (a, b) in reduced_unit_fractions(2000) {
        let f = frac(a, b);
        let (_, trace) = rational_search_unbounded(&mut RationalOracle::new(f.clone())).unwrap();
        let q = trace.total_queries as f64;
        let log_b = (b as f64).log2();
        if b <= 500 && q > ENVELOPE_C * log_b + ENVELOPE_SLACK {
            violations.push(format!("{f}: {q} queries > {:.3}", ENVELOPE_C * log_b + ENVELOPE_SLACK));
        }
        if q / log_b > worst.0 {
            worst = (q / log_b, f.to_string());
        }
    }
    let witness = (5..=20).map(|k| measure_family(8, 1, k).unwrap().ratio).fold(f64::MIN, f64::max);
    let envelope_ok = violations.is_empty();
    let ratio_ok = worst.0 <= ENVELOPE_C + RATIO_SLACK;
    let witness_ok = witness >= LOWER_BOUND_MIN;
    let mut details = vec![
        format!("envelope {ENVELOPE_C}·log2 b + {ENVELOPE_SLACK} over b ≤ 500: {} violations", violations.len()),
        format!(
            "max queries/log2 b over b ≤ 2000: {:.4} at {} (limit {:.4}): {}",
            worst.0,
            worst.1,
            ENVELOPE_C + RATIO_SLACK,
            if ratio_ok { "ok" } else { "exceeded" }
        ),
        format!(
            "best (L^8 R^1)^k ratio for k = 5..20: {witness:.4} (needs ≥ {LOWER_BOUND_MIN}): {}",
            if witness_ok { "ok" } else { "not reached" }
        ),
    ];
    details.extend(violations.into_iter().take(10));
    Outcome::new(envelope_ok && ratio_ok && witness_ok, "query envelope and worst-case ratio", details)
}

/// Thresholds, scans and the critical constant of the four-run step.
fn criterion_3() -> Outcome {
    let start = Instant::now();
    let c = Fraction::parse_decimal("2.5849").unwrap();
    let mut pass = true;
    let mut details = Vec::new();
    let expected = [(2, ScanMode::BaseCase, 11), (3, ScanMode::BaseCase, 35), (4, ScanMode::BaseCase, 115), (4, ScanMode::InductiveStep, 2450)];
    for (k, mode, want) in expected {
        let t = threshold(&c, k, mode).unwrap();
        pass &= t == want;
        let r = verify_tuple_inequality(k as usize, t, &c, mode).unwrap();
        pass &= r.holds();
        details.push(format!(
            "{mode} k={k}: threshold {t} (expected {want}), {} tuples, {} violations, argmax {:?}",
            r.tuples_checked,
            r.violations.len(),
            r.argmax_tuple
        ));
        if mode == ScanMode::InductiveStep {
            let critical = r.critical_constant();
            let four = critical.to_decimal(4);
            pass &= r.argmax_tuple == [4, 2, 2, 4] && four == "2.5849";
            pass &= critical.close_to(&BoundConstant::FourRun.value(), 200);
            details.push(format!("critical constant {} (16/log2 73 = {})", critical.to_decimal(8), BoundConstant::FourRun.decimal(8)));
        }
    }
    let elapsed = start.elapsed();
    pass &= elapsed <= Duration::from_secs(600);
    details.push(timed(Duration::from_secs(600), elapsed, "scans"));
    Outcome::new(pass, "thresholds 11/35/115/2450, zero violations, argmax (4,2,2,4)", details)
}

/// The (L⁸R¹)ᵏ family and the coefficient argmax.
fn criterion_4() -> Outcome {
    let mut details = Vec::new();
    let mut family_ok = true;
    let mut last = 0.0;
    for k in 5..=20 {
        let m = measure_family(8, 1, k).unwrap();
        let mirrored = measure_family(1, 8, k).unwrap();
        family_ok &= m.ratio >= LOWER_BOUND_MIN;
        last = m.ratio;
        details.push(format!(
            "k={k:>2}: (L^8 R^1)^k {} queries, ratio {:.4}; mirrored (L^1 R^8)^k ratio {:.4}",
            m.queries, m.ratio, mirrored.ratio
        ));
    }
    let converged = (last - LOWER_BOUND_LIMIT).abs() <= LOWER_BOUND_TOL;
    let w = worst_pair(1000);
    let argmax_ok = (w.a, w.b) == (8, 1) && w.coefficient == comparisons_coefficient(8, 1);
    details.push(format!("every k has ratio ≥ {LOWER_BOUND_MIN}: {family_ok}"));
    details.push(format!("k=20 ratio within {LOWER_BOUND_TOL} of {LOWER_BOUND_LIMIT}: {converged}"));
    details.push(format!("argmax over 1 ≤ a,b ≤ 1000: ({}, {}) coefficient {}", w.a, w.b, w.coefficient.to_decimal(10)));
    Outcome::new(family_ok && converged && argmax_ok, "lower-bound family and worst pair (8,1)", details)
}

struct Cell {
    name: &'static str,
    k: u32,
    fraction: Fraction,
    queries: u64,
    known: Fraction,
}

fn approximation_cells() -> (Vec<Cell>, Duration) {
    let start = Instant::now();
    let mut cells = Vec::new();
    for k in 1..=15u32 {
        let delta = Fraction::pow10_neg(k);
        for (name, kind) in CONSTANTS.iter().cloned() {
            let mut o = RealOracle::new(kind.clone());
            let a = approximate_unknown(&mut o, &delta).unwrap();
            let enc = kind.enclosure(4 * 64 + 2 * u64::from(k) * 4);
            let known = best_approx_known(&enc.lower(), &enc.upper(), &delta).unwrap();
            cells.push(Cell { name, k, fraction: a.fraction, queries: a.queries, known });
        }
    }
    (cells, start.elapsed())
}

/// All 60 approximation fractions.
fn criterion_5(cells: &[Cell], elapsed: Duration) -> Outcome {
    let mut bad = Vec::new();
    for (i, c) in cells.iter().enumerate() {
        let want: Fraction = TABLE_FRACTIONS[i / 4][i % 4].parse().unwrap();
        if c.fraction != want || c.known != want {
            bad.push(format!("{} 1e-{}: got {}, known-value {}, reference {want}", c.name, c.k, c.fraction, c.known));
        }
    }
    let pass = bad.is_empty() && elapsed <= Duration::from_secs(5);
    let mut details = vec![format!("{}/60 cells match", 60 - bad.len()), timed(Duration::from_secs(5), elapsed, "60 cells")];
    details.extend(bad);
    Outcome::new(pass, "approximation fractions for pi, e, sqrt2, sqrt5 at 1e-1..1e-15", details)
}

/// All 60 approximation query counts.
fn criterion_6(cells: &[Cell]) -> Outcome {
    let mut details = Vec::new();
    let mut matched = 0;
    for (i, c) in cells.iter().enumerate() {
        let want = TABLE_QUERIES[i / 4][i % 4];
        if c.queries == want {
            matched += 1;
        } else {
            details.push(format!("{} 1e-{}: {} queries, reference {want} (diff {:+})", c.name, c.k, c.queries, c.queries as i64 - want as i64));
        }
    }
    details.insert(0, format!("{matched}/60 cells match (each range test counted as one query)"));
    Outcome::new(matched == 60, "approximation query counts", details)
}

/// Seeded averages and maxima at n = 10, 10³, 10⁶.
fn criterion_7() -> Outcome {
    let start = Instant::now();
    let targets = [(1u32, 5.5, 3.5, 8u64), (3, 20.7, 15.1, 21), (6, 40.9, 35.5, 41)];
    let plan = TrialPlan { trials: STAT_TRIALS, seed: STAT_SEED };
    let mut pass = true;
    let mut details = Vec::new();
    for (e, km_avg, csb_avg, km_max) in targets {
        let n = BigUint::from(10u32).pow(e);
        let recs = run_search_bench(&plan, &n, Some(e), &[Algorithm::Km, Algorithm::Csb]).unwrap();
        let (km, csb) = (&recs[0], &recs[1]);
        let km_ok = (km.avg_queries - km_avg).abs() <= KM_AVG_TOL * km_avg && km.max_queries == km_max;
        let csb_ok = (csb.avg_queries - csb_avg).abs() <= CSB_AVG_TOL * csb_avg;
        let checks = km.check().is_ok() && csb.check().is_ok();
        pass &= km_ok && csb_ok && checks;
        details.push(format!(
            "n=10^{e}: km avg {:.3} (ref {km_avg} ±3%) max {} (ref {km_max}) {}; csb avg {:.3} (ref {csb_avg} ±8%) max {} {}",
            km.avg_queries,
            km.max_queries,
            if km_ok { "ok" } else { "MISMATCH" },
            csb.avg_queries,
            csb.max_queries,
            if csb_ok { "ok" } else { "MISMATCH" }
        ));
    }
    let elapsed = start.elapsed();
    pass &= elapsed <= Duration::from_secs(120);
    details.push(timed(Duration::from_secs(120), elapsed, "3 × 1000 trials"));
    Outcome::new(pass, format!("search statistics (seed {STAT_SEED}, {STAT_TRIALS} trials)"), details)
}

/// Small deterministic generator for test targets (SplitMix64).
struct SplitMix(u64);

impl SplitMix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
}

/// Unknown-value approximation against a scan; grid separation for n ≤ 60.
fn criterion_8() -> Outcome {
    let mut rng = SplitMix(EQUIV_SEED);
    let mut bad = Vec::new();
    let mut cases = 0;
    for _ in 0..EQUIV_TARGETS {
        let d = 1 + rng.next() % 2000;
        let n = 1 + rng.next() % (10 * d);
        let target = frac(n, d);
        let (tn, td) = to_pair(&target);
        for k in 1..=6u32 {
            cases += 1;
            let got = approximate_unknown(&mut RationalOracle::new(target.clone()), &Fraction::pow10_neg(k)).unwrap();
            let want = brute_best_approx(tn, td, 1, 10u128.pow(k));
            if to_pair(&got.fraction) != want {
                bad.push(format!("{target} 1e-{k}: got {}, scan {}/{}", got.fraction, want.0, want.1));
            }
        }
    }
    // Any two fractions in [0, 1] with denominators ≤ n are more than 1/(2n²) apart,
    // so a closed grid cell holds at most one of them.
    let mut separation_bad = Vec::new();
    for n in 2..=60u64 {
        let mut farey: Vec<(u64, u64)> = (1..=n).flat_map(|q| (0..=q).filter(move |&p| gcd(p, q) == 1).map(move |p| (p, q))).collect();
        farey.sort_by(|x, y| (x.0 * y.1).cmp(&(y.0 * x.1)));
        for w in farey.windows(2) {
            let ((p, q), (r, s)) = (w[0], w[1]);
            // (r/s − p/q)·2n² > 1  ⇔  2n²(rq − ps) > qs
            if 2 * n * n * (r * q - p * s) <= q * s {
                separation_bad.push(format!("n={n}: {p}/{q} and {r}/{s}"));
            }
        }
        for &(p, q) in &farey {
            let f = frac(p, q);
            let (found, _) = km_search(&mut RationalOracle::new(f.clone()), &BigUint::from(n)).unwrap();
            if found != f {
                separation_bad.push(format!("n={n}: km returned {found} for {f}"));
            }
        }
    }
    let pass = bad.is_empty() && separation_bad.is_empty();
    let mut details = vec![
        format!("{cases} (target, δ) cases, {} mismatches", bad.len()),
        format!("grid separation for n ≤ 60: {} failures", separation_bad.len()),
    ];
    details.extend(bad.into_iter().take(10));
    details.extend(separation_bad.into_iter().take(10));
    Outcome::new(pass, "approximation equals brute-force scan; grid separation", details)
}

/// Codec round trips for b ≤ 1000; trace invariants for every search of b ≤ 500.
fn criterion_9() -> Outcome {
    let mut bad = Vec::new();
    let mut trips = 0u64;
    for (a, b) in reduced_unit_fractions(1000) {
        trips += 1;
        let f = frac(a, b);
        let cf = to_continued_fraction(&f).unwrap();
        let path = cf_to_sb_path(&cf).unwrap();
        let ok = cf.evaluate() == f
            && sb_path_to_fraction(&path) == f
            && fraction_to_sb_path(&f).unwrap() == path
            && path.to_compact() == walk_path(a, b);
        if !ok {
            bad.push(format!("round trip failed for {f}"));
        }
    }
    let mut traces = 0u64;
    for (a, b) in reduced_unit_fractions(500) {
        traces += 1;
        let (_, trace) = rational_search_unbounded(&mut RationalOracle::new(frac(a, b))).unwrap();
        if let Err(e) = check_trace(&trace) {
            bad.push(format!("{a}/{b}: {e}"));
        }
    }
    let mut details = vec![format!("{trips} round trips, {traces} traces checked, {} failures", bad.len())];
    details.extend(bad.iter().take(10).cloned());
    Outcome::new(bad.is_empty(), "round trips, unit determinant, run recurrences, m/d ≥ 1/2", details)
}

fn main() -> ExitCode {
    let mut all = true;
    let mut report = |n: u32, o: Outcome| {
        println!("[{}] criterion {n}: {}", if o.pass { "PASS" } else { "FAIL" }, o.summary);
        for d in o.details {
            println!("    {d}");
        }
        all &= o.pass;
    };
    report(1, criterion_1());
    report(2, criterion_2());
    report(3, criterion_3());
    report(4, criterion_4());
    let (cells, elapsed) = approximation_cells();
    report(5, criterion_5(&cells, elapsed));
    report(6, criterion_6(&cells));
    report(7, criterion_7());
    report(8, criterion_8());
    report(9, criterion_9());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

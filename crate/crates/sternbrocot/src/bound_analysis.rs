//! Mechanized query-complexity analysis.
//!
//! * [`g`]: the per-run query budget `2⌊log₂ x⌋ + 1`.
//! * [`verify_tuple_inequality`]: exhaustive check of `Σ G(xᵢ) ≤ C·log₂ R(x)`
//!   over all tuples with `∏ xᵢ ≤ top`, where `R` is either the denominator
//!   reached after `k` runs from the root (base case) or the guaranteed
//!   growth factor of the denominator over `k` consecutive runs (inductive step).
//!   Verdicts use integers only: `2^{ΣG} ≤ R^C` is decided by a certified
//!   fixed-point bracket of `log₂ R`, falling back to exact powers on near-ties.
//! * [`growth_rates`], [`comparisons_coefficient`], [`worst_pair`]: the
//!   per-run growth of the alternating family `(LᵃRᵇ)ᵏ` and its query cost.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::exact_arith::{sb_path_to_fraction, Fraction, SBPath};
use crate::fixed::Fixed;
use crate::oracles::RationalOracle;
use crate::sb_search::{rational_search_unbounded, SearchError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("G is defined for x ≥ 1")]
    ZeroArgument,
    #[error("number of variables must be 1..=4, got {0}")]
    VariableCount(usize),
    #[error("constant must exceed 2, got {0}")]
    ConstantTooSmall(Fraction),
    #[error("constant {0} must have numerator and denominator below 2^32")]
    ConstantTooPrecise(Fraction),
    #[error("top must be between 1 and 2^40, got {0}")]
    TopOutOfRange(u64),
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// `G(x) = 2⌊log₂ x⌋ + 1`.
pub fn g(x: u64) -> Result<u64, BoundError> {
    if x == 0 {
        return Err(BoundError::ZeroArgument);
    }
    Ok(2 * u64::from(x.ilog2()) + 1)
}

/// Which right-hand side the scanner checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanMode {
    /// `R = d_k`, the denominator after runs `x₁…x_k` from the root.
    BaseCase,
    /// `R = A + B/2` where `d_l = A·d_{l−k} + B·m_{l−k}`: the least growth over `k` runs given `m/d ≥ 1/2`.
    InductiveStep,
}

impl fmt::Display for ScanMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScanMode::BaseCase => "base",
            ScanMode::InductiveStep => "step",
        })
    }
}

/// Coefficients `(A, B)` with `d_k = A·d₀ + B·m₀` after runs `xs`, from the
/// recurrences `d' = d + x·m`, `m' = d + (x − 1)·m`.
pub fn run_coefficients(xs: &[u64]) -> (u128, u128) {
    // (d, m) as linear forms in (d₀, m₀).
    let (mut d, mut m) = ((1u128, 0u128), (0u128, 1u128));
    for &x in xs {
        let x = u128::from(x);
        let nd = (d.0 + x * m.0, d.1 + x * m.1);
        let nm = (d.0 + (x - 1) * m.0, d.1 + (x - 1) * m.1);
        (d, m) = (nd, nm);
    }
    d
}

/// `R` as `N / 2^s` for a tuple under `mode`.
fn rhs(xs: &[u64], mode: ScanMode) -> (u128, u32) {
    let (a, b) = run_coefficients(xs);
    match mode {
        ScanMode::BaseCase => (a + b, 0),
        ScanMode::InductiveStep => (2 * a + b, 1),
    }
}

const LOG_BITS: u32 = 60;

/// Integers `(lo, hi)` with `lo ≤ 2^60·log₂ n ≤ hi`, `n ≥ 1`.
fn log2_bracket(n: u128) -> (i128, i128) {
    const P: u32 = 62;
    let e = 127 - n.leading_zeros();
    let (mut lo, mut hi) = if e <= P {
        let y = n << (P - e);
        (y, y)
    } else {
        let s = e - P;
        let y = n >> s;
        (y, if y << s == n { y } else { y + 1 })
    };
    let two = 1u128 << (P + 1);
    let (mut bits_lo, mut bits_hi) = (0i128, 0i128);
    for _ in 0..LOG_BITS {
        lo = (lo * lo) >> P;
        hi = (hi * hi).div_ceil(1 << P);
        bits_lo <<= 1;
        bits_hi <<= 1;
        if lo >= two {
            lo >>= 1;
            bits_lo += 1;
        }
        if hi >= two {
            hi = hi.div_ceil(2);
            bits_hi += 1;
        }
    }
    let base = i128::from(e) << LOG_BITS;
    // The upper chain can end at exactly 2, worth one more unit.
    (base + bits_lo, base + bits_hi + 1)
}

/// Exact test of `2^{sum} ≤ (N / 2^s)^{u/v}`, i.e. `2^{sum·v + s·u} ≤ N^u`.
fn holds(sum: u64, n: u128, s: u32, u: u64, v: u64) -> bool {
    let t = i128::from(sum) * i128::from(v) + i128::from(s) * i128::from(u);
    let (lo, hi) = log2_bracket(n);
    let lhs = t << LOG_BITS;
    if lhs <= i128::from(u) * lo {
        return true;
    }
    if lhs > i128::from(u) * hi {
        return false;
    }
    let t = u64::try_from(t).expect("exponent fits u64");
    let u = u32::try_from(u).expect("checked below 2^32");
    (BigUint::one() << t) <= BigUint::from(n).pow(u)
}

/// Whether `sum1 / log₂ R1 > sum2 / log₂ R2` with `R = N / 2^s > 1`, exactly.
fn ratio_greater(sum1: u64, r1: (u128, u32), sum2: u64, r2: (u128, u32)) -> bool {
    // R2^{sum1} > R1^{sum2}  ⇔  N2^{sum1}·2^{s1·sum2} > N1^{sum2}·2^{s2·sum1}
    let lhs = BigUint::from(r2.0).pow(sum1 as u32) << (u64::from(r1.1) * sum2);
    let rhs = BigUint::from(r1.0).pow(sum2 as u32) << (u64::from(r2.1) * sum1);
    lhs > rhs
}

/// Outcome of one exhaustive scan.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct TupleScanReport {
    pub num_vars: usize,
    pub top: u64,
    pub mode: ScanMode,
    pub constant: Fraction,
    pub tuples_checked: u64,
    pub violations: Vec<Vec<u64>>,
    /// Tuple maximizing `Σ G / log₂ R` (first in enumeration order on ties).
    pub argmax_tuple: Vec<u64>,
    /// `Σ G` and `N`, `s` of the argmax tuple, so that `max_ratio = sum / log₂(N / 2^s)`.
    pub argmax_sum: u64,
    pub argmax_rhs: (u128, u32),
    /// Display-only rendering of the maximal ratio, i.e. the least `C` that would pass.
    pub max_ratio: f64,
}

impl TupleScanReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    /// The critical constant `Σ G / log₂ R` of the argmax tuple, to high precision.
    pub fn critical_constant(&self) -> Fixed {
        let (n, s) = self.argmax_rhs;
        let n = i64::try_from(n).expect("RHS fits i64");
        let log = Fixed::from_int(n).log2().sub(&Fixed::from_int(i64::from(s)));
        Fixed::from_int(self.argmax_sum as i64).div(&log)
    }
}

/// Calls `f` on every tuple of `k` positive integers with product ≤ `top`.
fn for_each_tuple(k: usize, top: u64, f: &mut impl FnMut(&[u64])) {
    fn rec(buf: &mut Vec<u64>, k: usize, budget: u64, f: &mut impl FnMut(&[u64])) {
        if buf.len() == k {
            f(buf);
            return;
        }
        for x in 1..=budget {
            buf.push(x);
            rec(buf, k, budget / x, f);
            buf.pop();
        }
    }
    rec(&mut Vec::with_capacity(k), k, top, f);
}

fn constant_parts(c: &Fraction) -> Result<(u64, u64), BoundError> {
    if c <= &Fraction::integer(BigUint::from(2u32)) || c.is_infinite() {
        return Err(BoundError::ConstantTooSmall(c.clone()));
    }
    match (c.num().to_u32(), c.den().to_u32()) {
        (Some(u), Some(v)) => Ok((u64::from(u), u64::from(v))),
        _ => Err(BoundError::ConstantTooPrecise(c.clone())),
    }
}

/// Checks `Σ G(xᵢ) ≤ c·log₂ R(x)` for all `x ∈ ℕ₊^k` with `∏ xᵢ ≤ top`.
pub fn verify_tuple_inequality(
    num_vars: usize,
    top: u64,
    c: &Fraction,
    mode: ScanMode,
) -> Result<TupleScanReport, BoundError> {
    if !(1..=4).contains(&num_vars) {
        return Err(BoundError::VariableCount(num_vars));
    }
    if top == 0 || top > 1 << 40 {
        return Err(BoundError::TopOutOfRange(top));
    }
    let (u, v) = constant_parts(c)?;
    let mut checked = 0u64;
    let mut violations = Vec::new();
    let mut best: Option<(Vec<u64>, u64, (u128, u32))> = None;
    for_each_tuple(num_vars, top, &mut |xs| {
        checked += 1;
        let sum: u64 = xs.iter().map(|&x| g(x).expect("x ≥ 1")).sum();
        let r = rhs(xs, mode);
        if !holds(sum, r.0, r.1, u, v) {
            violations.push(xs.to_vec());
        }
        let better = match &best {
            None => true,
            Some((_, bs, br)) => ratio_greater(sum, r, *bs, *br),
        };
        if better {
            best = Some((xs.to_vec(), sum, r));
        }
    });
    let (argmax_tuple, argmax_sum, argmax_rhs) = best.expect("at least one tuple");
    let max_ratio = argmax_sum as f64 / ((argmax_rhs.0 as f64).log2() - f64::from(argmax_rhs.1));
    Ok(TupleScanReport {
        num_vars,
        top,
        mode,
        constant: c.clone(),
        tuples_checked: checked,
        violations,
        argmax_tuple,
        argmax_sum,
        argmax_rhs,
        max_ratio,
    })
}

/// Product bound above which the relaxed inequality holds for `k` runs:
/// `⌈2^{k/(c−2)}⌉` for base cases, `⌈2^{(k+c)/(c−2)}⌉` for the inductive step.
pub fn threshold(c: &Fraction, sum_terms: u32, mode: ScanMode) -> Result<u64, BoundError> {
    let (u, v) = constant_parts(c)?;
    let k = u64::from(sum_terms);
    // Exponent P/Q.
    let q = u - 2 * v;
    let p = match mode {
        ScanMode::BaseCase => k * v,
        ScanMode::InductiveStep => k * v + u,
    };
    let g = num_integer::gcd(p, q);
    let (p, q) = (p / g, u32::try_from(q / g).expect("q < 2^32"));
    // Least T with T^q ≥ 2^p.
    let target = BigUint::one() << p;
    let (mut lo, mut hi) = (0u64, 1u64 << (p / u64::from(q) + 1).min(62));
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if BigUint::from(mid).pow(q) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// The headline constants, each an exact expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundConstant {
    /// `16 / log₂ 73`, four runs at a time.
    FourRun,
    /// `10 / log₂ 13`, two runs at a time.
    TwoRun,
    /// `5 / log₂ 3`, one run at a time.
    OneRun,
    /// `8 / log₂(5 + 2√6)`, the `(L⁸R¹)ᵏ` lower-bound family.
    LowerBound,
}

impl BoundConstant {
    pub fn expression(self) -> &'static str {
        match self {
            BoundConstant::FourRun => "16/log2(73)",
            BoundConstant::TwoRun => "10/log2(13)",
            BoundConstant::OneRun => "5/log2(3)",
            BoundConstant::LowerBound => "8/log2(5+2*sqrt(6))",
        }
    }

    pub fn value(self) -> Fixed {
        let over = |num: i64, arg: Fixed| Fixed::from_int(num).div(&arg.log2());
        match self {
            BoundConstant::FourRun => over(16, Fixed::from_int(73)),
            BoundConstant::TwoRun => over(10, Fixed::from_int(13)),
            BoundConstant::OneRun => over(5, Fixed::from_int(3)),
            BoundConstant::LowerBound => {
                over(8, Fixed::from_int(5).add(&Fixed::from_int(2).mul(&Fixed::from_int(6).sqrt())))
            }
        }
    }

    /// Whether the constant bounds the worst case from above.
    pub fn is_upper_bound(self) -> bool {
        self != BoundConstant::LowerBound
    }

    /// Decimal rendering to `digits` places, rounded outward so that the
    /// printed value is still a valid bound: up for upper bounds, down for
    /// the lower bound.
    pub fn decimal(self, digits: usize) -> String {
        self.value().to_decimal_directed(digits, self.is_upper_bound())
    }
}

/// Asymptotic per-run denominator growth `(φₐ, φ_b)` of `(LᵃRᵇ)ᵏ`.
pub fn growth_rates(a: u64, b: u64) -> (Fixed, Fixed) {
    assert!(a >= 1 && b >= 1, "run lengths must be positive");
    (phi(a, b), phi(b, a))
}

/// `(2a − 2b + a²b + a·√(4ab + a²b²)) / (2(a + ab − b))`, the first formula multiplied through by `a`.
fn phi(a: u64, b: u64) -> Fixed {
    let (a, b) = (a as i64, b as i64);
    let root = Fixed::from_int(4 * a * b + a * a * b * b).sqrt();
    let num = Fixed::from_int(2 * a - 2 * b + a * a * b).add(&Fixed::from_int(a).mul(&root));
    num.div(&Fixed::from_int(2 * (a + a * b - b)))
}

/// Queries per bit of denominator for the family `(LᵃRᵇ)ᵏ`:
/// `(G(a) + G(b)) / log₂(φₐ·φ_b)`.
pub fn comparisons_coefficient(a: u64, b: u64) -> Fixed {
    let (pa, pb) = growth_rates(a, b);
    let cost = g(a).expect("a ≥ 1") + g(b).expect("b ≥ 1");
    Fixed::from_int(cost as i64).div(&pa.mul(&pb).log2())
}

fn coefficient_f64(a: u64, b: u64) -> f64 {
    let (af, bf) = (a as f64, b as f64);
    let root = (4.0 * af * bf + af * af * bf * bf).sqrt();
    let phi_a = (2.0 - 2.0 * bf / af + af * bf + root) / (2.0 * (1.0 + bf - bf / af));
    let phi_b = (2.0 - 2.0 * af / bf + af * bf + root) / (2.0 * (1.0 + af - af / bf));
    (g(a).expect("a ≥ 1") + g(b).expect("b ≥ 1")) as f64 / (phi_a * phi_b).log2()
}

const TIE_BITS: u64 = 300;

#[derive(Debug, Clone, PartialEq)]
pub struct WorstPair {
    pub a: u64,
    pub b: u64,
    pub coefficient: Fixed,
}

/// Pair `(a, b) ∈ [1, max]²` maximizing [`comparisons_coefficient`].
/// Exact ties occur (the coefficient is symmetric, and `(4,2)` matches
/// `(8,1)`); they resolve to the largest `a`.
pub fn worst_pair(max: u64) -> WorstPair {
    assert!(max >= 1, "empty range");
    let mut scores = Vec::with_capacity((max * max) as usize);
    for a in 1..=max {
        for b in 1..=max {
            scores.push((coefficient_f64(a, b), a, b));
        }
    }
    let top = scores.iter().map(|s| s.0).fold(f64::MIN, f64::max);
    // Re-rank every float near-tie at full precision.
    let mut best: Option<WorstPair> = None;
    for &(_, a, b) in scores.iter().filter(|s| s.0 >= top * (1.0 - 1e-9)) {
        let coefficient = comparisons_coefficient(a, b);
        let replace = match &best {
            None => true,
            // Values within the fixed-point error are the same closed form.
            Some(w) if coefficient.close_to(&w.coefficient, TIE_BITS) => a > w.a,
            Some(w) => coefficient.cmp(&w.coefficient) == Ordering::Greater,
        };
        if replace {
            best = Some(WorstPair { a, b, coefficient });
        }
    }
    best.expect("non-empty")
}

/// The fraction with path `(LᵃRᵇ)ᵏ`.
pub fn worst_case_fraction(a: u64, b: u64, k: usize) -> Fraction {
    assert!(a >= 1 && b >= 1 && k >= 1, "a, b, k must be positive");
    let exps = std::iter::repeat_n([a, b], k).flatten().map(BigUint::from);
    sb_path_to_fraction(&SBPath::from_exponents(exps).expect("positive alternating runs"))
}

/// Search cost of one member of the family.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct FamilyMeasurement {
    pub a: u64,
    pub b: u64,
    pub k: usize,
    pub fraction: Fraction,
    pub queries: u64,
    /// `queries / log₂(denominator)`.
    pub ratio: f64,
}

/// Runs the unbounded search on `worst_case_fraction(a, b, k)`.
pub fn measure_family(a: u64, b: u64, k: usize) -> Result<FamilyMeasurement, BoundError> {
    let fraction = worst_case_fraction(a, b, k);
    let mut oracle = RationalOracle::new(fraction.clone());
    let (found, trace) = rational_search_unbounded(&mut oracle)?;
    debug_assert_eq!(found, fraction);
    let ratio = trace.total_queries as f64 / log2_biguint(fraction.den());
    Ok(FamilyMeasurement { a, b, k, fraction, queries: trace.total_queries, ratio })
}

/// `log₂ n` in floating point, exact to double precision for any size.
pub fn log2_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    let shift = bits.saturating_sub(64);
    (n >> shift).to_f64().expect("fits").log2() + shift as f64
}

/// Worst observed search cost over every reduced `a/b` with `2 ≤ b ≤ max_b`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct EnvelopeReport {
    pub max_b: u64,
    pub fractions: u64,
    /// Largest `queries / log₂ b`.
    pub worst_ratio: f64,
    pub worst_fraction: Fraction,
    /// Fractions whose cost exceeds `c·log₂ b + slack`.
    pub violations: Vec<(Fraction, u64)>,
}

/// Exhaustive unbounded-search sweep against the envelope `c·log₂ b + slack`.
pub fn envelope_sweep(max_b: u64, c: f64, slack: f64) -> Result<EnvelopeReport, BoundError> {
    let mut report = EnvelopeReport {
        max_b,
        fractions: 0,
        worst_ratio: 0.0,
        worst_fraction: Fraction::one(),
        violations: Vec::new(),
    };
    for b in 2..=max_b {
        let log_b = (b as f64).log2();
        for a in (1..b).filter(|&a| num_integer::gcd(a, b) == 1) {
            let f = Fraction::from_u64(a, b).expect("b > 0");
            let mut oracle = RationalOracle::new(f.clone());
            let (_, trace) = rational_search_unbounded(&mut oracle)?;
            let q = trace.total_queries;
            report.fractions += 1;
            if q as f64 > c * log_b + slack {
                report.violations.push((f.clone(), q));
            }
            let ratio = q as f64 / log_b;
            if ratio > report.worst_ratio {
                report.worst_ratio = ratio;
                report.worst_fraction = f;
            }
        }
    }
    Ok(report)
}

//! Counting comparison oracles.
//!
//! An oracle hides a positive value `α` and answers, for a queried fraction
//! `β`, whether `β` is below, equal to, or above `α`. Every answer is exact:
//! quadratic irrationals are decided by integer arithmetic, `π` and `e` by
//! certified enclosures refined until `β` falls outside them.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact_arith::{cross_cmp, Fraction};

/// Default refinement budget for `π` and `e`, in decimal digits.
pub const DEFAULT_PRECISION_DIGITS: u32 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("cannot separate {beta} from {target} within {digits} digits")]
    PrecisionExhausted { target: String, beta: Fraction, digits: u32 },
    #[error("query {0} is not a finite non-negative fraction")]
    InvalidQuery(Fraction),
    #[error("unknown target {0:?}; expected a/b, sqrt:d, pi or e")]
    UnknownTarget(String),
}

/// Position of the queried `β` relative to the hidden `α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum ComparisonResult {
    /// `β < α`
    Less,
    /// `β = α`
    Equal,
    /// `β > α`
    Greater,
}

impl From<Ordering> for ComparisonResult {
    /// Maps `β.cmp(α)`.
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => ComparisonResult::Less,
            Ordering::Equal => ComparisonResult::Equal,
            Ordering::Greater => ComparisonResult::Greater,
        }
    }
}

/// A stateful source of three-valued comparison answers with a query counter.
pub trait ComparisonOracle {
    /// Compares `beta` against the hidden value; counts exactly one query.
    fn compare(&mut self, beta: &Fraction) -> Result<ComparisonResult, OracleError>;
    fn read_count(&self) -> u64;
    fn reset_count(&mut self);
}

impl<O: ComparisonOracle + ?Sized> ComparisonOracle for &mut O {
    fn compare(&mut self, beta: &Fraction) -> Result<ComparisonResult, OracleError> {
        (**self).compare(beta)
    }
    fn read_count(&self) -> u64 {
        (**self).read_count()
    }
    fn reset_count(&mut self) {
        (**self).reset_count()
    }
}

fn check_query(beta: &Fraction) -> Result<(), OracleError> {
    if beta.is_infinite() {
        Err(OracleError::InvalidQuery(beta.clone()))
    } else {
        Ok(())
    }
}

/// Hides an exact rational.
#[derive(Debug, Clone)]
pub struct RationalOracle {
    hidden: Fraction,
    count: u64,
}

impl RationalOracle {
    pub fn new(hidden: Fraction) -> Self {
        assert!(!hidden.is_infinite(), "hidden value must be finite");
        Self { hidden, count: 0 }
    }

    pub fn compare_rational(&mut self, beta: &Fraction) -> Result<ComparisonResult, OracleError> {
        check_query(beta)?;
        self.count += 1;
        Ok(beta.cmp(&self.hidden).into())
    }
}

impl ComparisonOracle for RationalOracle {
    fn compare(&mut self, beta: &Fraction) -> Result<ComparisonResult, OracleError> {
        self.compare_rational(beta)
    }
    fn read_count(&self) -> u64 {
        self.count
    }
    fn reset_count(&mut self) {
        self.count = 0;
    }
}

/// The hidden value of a [`RealOracle`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RealKind {
    /// `√d` for a positive integer `d`.
    Sqrt(u64),
    Pi,
    E,
    Rational(Fraction),
}

impl fmt::Display for RealKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealKind::Sqrt(d) => write!(f, "sqrt:{d}"),
            RealKind::Pi => write!(f, "pi"),
            RealKind::E => write!(f, "e"),
            RealKind::Rational(r) => write!(f, "{r}"),
        }
    }
}

impl FromStr for RealKind {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let unknown = || OracleError::UnknownTarget(s.to_string());
        match s {
            "pi" => Ok(RealKind::Pi),
            "e" => Ok(RealKind::E),
            _ => {
                if let Some(d) = s.strip_prefix("sqrt:") {
                    let d: u64 = d.parse().map_err(|_| unknown())?;
                    if d == 0 {
                        return Err(unknown());
                    }
                    Ok(RealKind::Sqrt(d))
                } else {
                    let r: Fraction = s.parse().map_err(|_| unknown())?;
                    if r.is_infinite() {
                        return Err(unknown());
                    }
                    Ok(RealKind::Rational(r))
                }
            }
        }
    }
}

/// `lo / 2^bits ≤ α ≤ hi / 2^bits`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: BigUint,
    pub hi: BigUint,
    pub bits: u64,
}

impl Enclosure {
    pub fn lower(&self) -> Fraction {
        Fraction::new(self.lo.clone(), BigUint::one() << self.bits).expect("non-zero denominator")
    }

    pub fn upper(&self) -> Fraction {
        Fraction::new(self.hi.clone(), BigUint::one() << self.bits).expect("non-zero denominator")
    }

    /// Sign of `beta − α` when the enclosure decides it.
    fn locate(&self, beta: &Fraction) -> Option<ComparisonResult> {
        let scaled = beta.num() << self.bits;
        if cross_cmp(&scaled, beta.den(), &self.lo, &BigUint::one()) == Ordering::Less {
            Some(ComparisonResult::Less)
        } else if cross_cmp(&scaled, beta.den(), &self.hi, &BigUint::one()) == Ordering::Greater {
            Some(ComparisonResult::Greater)
        } else {
            None
        }
    }
}

impl RealKind {
    /// A certified enclosure of width at most a few units of `2^-bits`.
    pub fn enclosure(&self, bits: u64) -> Enclosure {
        match self {
            RealKind::Sqrt(d) => {
                let s = (BigUint::from(*d) << (2 * bits)).sqrt();
                let hi = if &s * &s == BigUint::from(*d) << (2 * bits) { s.clone() } else { &s + 1u32 };
                Enclosure { lo: s, hi, bits }
            }
            RealKind::Rational(r) => {
                let scaled = r.num() << bits;
                let lo = &scaled / r.den();
                let hi = num_integer::Integer::div_ceil(&scaled, r.den());
                Enclosure { lo, hi, bits }
            }
            RealKind::Pi => series_enclosure(bits, pi_scaled),
            RealKind::E => series_enclosure(bits, e_scaled),
        }
    }

    /// Exact rational value, if any.
    pub fn as_rational(&self) -> Option<Fraction> {
        match self {
            RealKind::Rational(r) => Some(r.clone()),
            RealKind::Sqrt(d) => {
                let s = d.sqrt();
                (s * s == *d).then(|| Fraction::integer(BigUint::from(s)))
            }
            _ => None,
        }
    }
}

const GUARD_BITS: u64 = 32;

/// Wraps a truncated series evaluator returning `(value, error bound)` at a
/// scale of `2^(bits + GUARD_BITS)`.
fn series_enclosure(bits: u64, eval: fn(u64) -> (BigUint, BigUint)) -> Enclosure {
    let scale = bits + GUARD_BITS;
    let (v, err) = eval(scale);
    let lo = if v > err { &v - &err } else { BigUint::zero() };
    Enclosure { lo, hi: v + err, bits: scale }
}

/// `atan(1/x)·2^scale`, alternating series with floored terms.
/// Returns the signed sum as (positive part, negative part) and an error bound.
fn atan_inv_scaled(x: u32, scale: u64) -> (BigUint, BigUint, BigUint) {
    let x2 = BigUint::from(x) * x;
    let mut power = (BigUint::one() << scale) / x;
    let (mut pos, mut neg) = (BigUint::zero(), BigUint::zero());
    let mut k = 0u64;
    while !power.is_zero() {
        let term = &power / (2 * k + 1);
        if k.is_multiple_of(2) {
            pos += term;
        } else {
            neg += term;
        }
        power /= &x2;
        k += 1;
    }
    // Each floored power and term is off by < 2 units; the dropped tail is < 1 unit.
    (pos, neg, BigUint::from(2 * k + 4))
}

/// `π·2^scale` via Machin's formula `π = 16·atan(1/5) − 4·atan(1/239)`.
fn pi_scaled(scale: u64) -> (BigUint, BigUint) {
    let (p5, n5, e5) = atan_inv_scaled(5, scale);
    let (p239, n239, e239) = atan_inv_scaled(239, scale);
    let value = (p5 * 16u32 + n239 * 4u32) - (n5 * 16u32 + p239 * 4u32);
    (value, e5 * 16u32 + e239 * 4u32)
}

/// `e·2^scale` via `Σ 1/j!`.
fn e_scaled(scale: u64) -> (BigUint, BigUint) {
    let mut term = BigUint::one() << scale;
    let mut sum = BigUint::zero();
    let mut j = 0u64;
    while !term.is_zero() {
        sum += &term;
        j += 1;
        term /= j;
    }
    // Each floored term is within 2 units of the true term; the tail is < 1 unit.
    (sum, BigUint::from(2 * j + 4))
}

/// Hides `√d`, `π`, `e`, or a rational, answering exactly.
#[derive(Debug, Clone)]
pub struct RealOracle {
    kind: RealKind,
    precision_digits: u32,
    cached: Option<Enclosure>,
    count: u64,
}

impl RealOracle {
    pub fn new(kind: RealKind) -> Self {
        Self::with_budget(kind, DEFAULT_PRECISION_DIGITS)
    }

    pub fn with_budget(kind: RealKind, precision_digits: u32) -> Self {
        Self { kind, precision_digits, cached: None, count: 0 }
    }

    pub fn kind(&self) -> &RealKind {
        &self.kind
    }

    pub fn precision_digits(&self) -> u32 {
        self.precision_digits
    }

    fn max_bits(&self) -> u64 {
        // ⌈digits · log2(10)⌉
        (u64::from(self.precision_digits) * 33_220).div_ceil(10_000)
    }

    pub fn compare_real(&mut self, beta: &Fraction) -> Result<ComparisonResult, OracleError> {
        check_query(beta)?;
        self.count += 1;
        match &self.kind {
            RealKind::Rational(r) => Ok(beta.cmp(r).into()),
            RealKind::Sqrt(d) => {
                // β vs √d  ⇔  num² vs d·den²
                let lhs = beta.num() * beta.num();
                let rhs = beta.den() * beta.den() * *d;
                Ok(lhs.cmp(&rhs).into())
            }
            RealKind::Pi | RealKind::E => self.refine_until_separated(beta),
        }
    }

    fn refine_until_separated(&mut self, beta: &Fraction) -> Result<ComparisonResult, OracleError> {
        let max_bits = self.max_bits();
        if let Some(r) = self.cached.as_ref().and_then(|e| e.locate(beta)) {
            return Ok(r);
        }
        let mut bits = self.cached.as_ref().map_or(64, |e| (e.bits - GUARD_BITS) * 2);
        bits = bits.max(2 * beta.den().bits() + 16).min(max_bits);
        loop {
            let enc = self.kind.enclosure(bits);
            let found = enc.locate(beta);
            self.cached = Some(enc);
            if let Some(r) = found {
                return Ok(r);
            }
            if bits >= max_bits {
                return Err(OracleError::PrecisionExhausted {
                    target: self.kind.to_string(),
                    beta: beta.clone(),
                    digits: self.precision_digits,
                });
            }
            bits = (bits * 2).min(max_bits);
        }
    }
}

impl FromStr for RealOracle {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(Self::new(s.parse()?))
    }
}

impl ComparisonOracle for RealOracle {
    fn compare(&mut self, beta: &Fraction) -> Result<ComparisonResult, OracleError> {
        self.compare_real(beta)
    }
    fn read_count(&self) -> u64 {
        self.count
    }
    fn reset_count(&mut self) {
        self.count = 0;
    }
}

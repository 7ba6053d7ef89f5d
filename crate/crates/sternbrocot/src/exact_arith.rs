//! Exact non-negative rationals, mediants, continued fractions and
//! run-length encoded Stern–Brocot paths.
//!
//! Every [`Fraction`] is reduced on construction, so equality is structural.
//! The formal infinity `1/0` is a valid value; it only ever appears as a
//! bracketing endpoint of the generalized tree over `(0, ∞)`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("0/0 is not a fraction")]
    Indeterminate,
    #[error("mediant requires left < right, got {left} and {right}")]
    UnorderedMediant { left: Fraction, right: Fraction },
    #[error("cannot compare infinity with infinity")]
    InfiniteComparison,
    #[error("infinity has no continued fraction expansion")]
    InfiniteExpansion,
    #[error("continued fraction {0} does not lie in (0, 1)")]
    NotInUnitInterval(String),
    #[error("fraction {0} does not lie in (0, 1)")]
    FractionOutsideUnitInterval(Fraction),
    #[error("invalid continued fraction: {0}")]
    InvalidContinuedFraction(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("cannot parse {0:?} as a fraction")]
    Parse(String),
}

/// A reduced non-negative rational `num/den`, or the sentinel `1/0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Fraction {
    num: BigUint,
    den: BigUint,
}

impl Fraction {
    /// Builds `num/den` in lowest terms. Any `k/0` with `k > 0` becomes `1/0`.
    pub fn new(num: BigUint, den: BigUint) -> Result<Self, ArithError> {
        if den.is_zero() {
            return if num.is_zero() {
                Err(ArithError::Indeterminate)
            } else {
                Ok(Self::infinity())
            };
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        if g.is_one() {
            Ok(Self { num, den })
        } else {
            Ok(Self { num: num / &g, den: den / g })
        }
    }

    /// Convenience constructor for machine-sized inputs.
    pub fn from_u64(num: u64, den: u64) -> Result<Self, ArithError> {
        Self::new(BigUint::from(num), BigUint::from(den))
    }

    /// Skips the gcd; callers guarantee `gcd(num, den) = 1` (e.g. Farey neighbours).
    pub(crate) fn from_coprime(num: BigUint, den: BigUint) -> Self {
        debug_assert!(num.gcd(&den).is_one(), "{num}/{den} is not reduced");
        Self { num, den }
    }

    pub fn integer(n: BigUint) -> Self {
        Self { num: n, den: BigUint::one() }
    }

    pub fn zero() -> Self {
        Self { num: BigUint::zero(), den: BigUint::one() }
    }

    pub fn one() -> Self {
        Self { num: BigUint::one(), den: BigUint::one() }
    }

    pub fn infinity() -> Self {
        Self { num: BigUint::one(), den: BigUint::zero() }
    }

    pub fn num(&self) -> &BigUint {
        &self.num
    }

    pub fn den(&self) -> &BigUint {
        &self.den
    }

    pub fn is_infinite(&self) -> bool {
        self.den.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    /// `⌊self⌋`; panics on infinity.
    pub fn floor(&self) -> BigUint {
        assert!(!self.is_infinite(), "floor of infinity");
        &self.num / &self.den
    }

    /// `⌈self⌉`; panics on infinity.
    pub fn ceil(&self) -> BigUint {
        assert!(!self.is_infinite(), "ceil of infinity");
        self.num.div_ceil(&self.den)
    }

    /// `1/self`, mapping `0 ↔ 1/0`.
    pub fn recip(&self) -> Self {
        Self { num: self.den.clone(), den: self.num.clone() }
    }

    /// Exact sum of two finite fractions.
    pub fn add(&self, other: &Self) -> Self {
        assert!(!self.is_infinite() && !other.is_infinite(), "sum with infinity");
        Self::new(&self.num * &other.den + &other.num * &self.den, &self.den * &other.den)
            .expect("denominator is non-zero")
    }

    /// Exact difference, or `None` when it would be negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        assert!(!self.is_infinite() && !other.is_infinite(), "difference with infinity");
        let a = &self.num * &other.den;
        let b = &other.num * &self.den;
        if a < b {
            return None;
        }
        Some(Self::new(a - b, &self.den * &other.den).expect("denominator is non-zero"))
    }

    /// `|self - other|` for finite fractions.
    pub fn abs_diff(&self, other: &Self) -> Self {
        self.checked_sub(other).or_else(|| other.checked_sub(self)).expect("one order is non-negative")
    }

    /// `10^-k`.
    pub fn pow10_neg(k: u32) -> Self {
        Self::from_coprime(BigUint::one(), BigUint::from(10u32).pow(k))
    }

    /// Lossy conversion for display and plotting.
    pub fn to_f64(&self) -> f64 {
        if self.is_infinite() {
            return f64::INFINITY;
        }
        match (self.num.to_f64(), self.den.to_f64()) {
            (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
            _ => {
                // Scale both down so the quotient survives conversion.
                let shift = self.num.bits().max(self.den.bits()).saturating_sub(1000);
                let n = (&self.num >> shift).to_f64().unwrap_or(f64::INFINITY);
                let d = (&self.den >> shift).to_f64().unwrap_or(f64::INFINITY);
                n / d
            }
        }
    }

    /// Accepts `p/q`, `inf`, integers, decimals (`0.25`) and scientific
    /// notation (`1e-5`, `2.5E3`).
    pub fn parse_decimal(s: &str) -> Result<Self, ArithError> {
        let s = s.trim();
        if s.contains('/') || s == "inf" {
            return s.parse();
        }
        let err = || ArithError::Parse(s.to_string());
        let (mantissa, exp) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| err())?),
            None => (s, 0),
        };
        let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err());
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let digits: BigUint = format!("{int_part}{frac_part}").parse().map_err(|_| err())?;
        let scale = exp - frac_part.len() as i64;
        let ten = BigUint::from(10u32);
        let pow = |k: i64| -> Result<BigUint, ArithError> {
            let k = u32::try_from(k).map_err(|_| err())?;
            Ok(ten.pow(k))
        };
        if scale >= 0 {
            Self::new(digits * pow(scale)?, BigUint::one())
        } else {
            Self::new(digits, pow(-scale)?)
        }
    }
}

impl Ord for Fraction {
    /// Cross-multiplication order with `1/0` above every finite value.
    /// `1/0 == 1/0` here so that `Ord` agrees with `Eq`; [`compare`] rejects it.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => cross_cmp(&self.num, &self.den, &other.num, &other.den),
        }
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sign of `a/b - c/d` for positive `b`, `d`, with a word-sized fast path.
pub(crate) fn cross_cmp(a: &BigUint, b: &BigUint, c: &BigUint, d: &BigUint) -> Ordering {
    if let (Some(a), Some(b), Some(c), Some(d)) = (a.to_u64(), b.to_u64(), c.to_u64(), d.to_u64()) {
        return (a as u128 * d as u128).cmp(&(c as u128 * b as u128));
    }
    (a * d).cmp(&(c * b))
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Fraction {
    type Err = ArithError;

    /// Parses `num/den`, a bare integer, or `inf`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "inf" {
            return Ok(Self::infinity());
        }
        let err = || ArithError::Parse(s.to_string());
        let parse = |t: &str| -> Result<BigUint, ArithError> {
            let t = t.trim();
            if t.is_empty() || !t.chars().all(|c| c.is_ascii_digit()) {
                return Err(err());
            }
            t.parse().map_err(|_| err())
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let (n, d) = (parse(n)?, parse(d)?);
                if d.is_zero() {
                    return Err(err());
                }
                Self::new(n, d)
            }
            None => Ok(Self::integer(parse(s)?)),
        }
    }
}

impl serde::Serialize for Fraction {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Fraction {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Exact three-way comparison; infinity is above every finite value.
pub fn compare(a: &Fraction, b: &Fraction) -> Result<Ordering, ArithError> {
    if a.is_infinite() && b.is_infinite() {
        return Err(ArithError::InfiniteComparison);
    }
    Ok(a.cmp(b))
}

/// `(a+c)/(b+d)` for `left = a/b < right = c/d`.
pub fn mediant(left: &Fraction, right: &Fraction) -> Result<Fraction, ArithError> {
    if compare(left, right)? != Ordering::Less {
        return Err(ArithError::UnorderedMediant { left: left.clone(), right: right.clone() });
    }
    Fraction::new(&left.num + &right.num, &left.den + &right.den)
}

/// Descent direction in the tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Direction {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Direction::Left => 'L',
            Direction::Right => 'R',
        }
    }
}

/// A pair of Farey neighbours `low < high` with `high.num·low.den − low.num·high.den = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bracket {
    pub low: Fraction,
    pub high: Fraction,
}

impl Bracket {
    /// `(0/1, 1/1)`, the start of every descent inside `(0, 1)`.
    pub fn unit() -> Self {
        Self { low: Fraction::zero(), high: Fraction::one() }
    }

    /// `(0/1, 1/0)`, the start of the generalized tree over `(0, ∞)`.
    pub fn positive() -> Self {
        Self { low: Fraction::zero(), high: Fraction::infinity() }
    }

    /// The node reached after `t` repeated mediants towards `dir`:
    /// `(high + t·low)` for LEFT, `(low + t·high)` for RIGHT.
    pub fn step(&self, dir: Direction, t: &BigUint) -> Fraction {
        let (near, far) = match dir {
            Direction::Left => (&self.high, &self.low),
            Direction::Right => (&self.low, &self.high),
        };
        Fraction::from_coprime(&near.num + t * &far.num, &near.den + t * &far.den)
    }

    /// The bracket after a run of `x ≥ 1` steps towards `dir`.
    pub fn descend(&self, dir: Direction, x: &BigUint) -> Self {
        let node = self.step(dir, x);
        let prev = self.step(dir, &(x - 1u32));
        match dir {
            Direction::Left => Self { low: node, high: prev },
            Direction::Right => Self { low: prev, high: node },
        }
    }

    /// `high.num·low.den − low.num·high.den`, which is 1 for Farey neighbours.
    pub fn determinant(&self) -> num_bigint::BigInt {
        use num_bigint::BigInt;
        BigInt::from(&self.high.num * &self.low.den) - BigInt::from(&self.low.num * &self.high.den)
    }
}

/// A continued fraction `[a0; a1, ..., ak]` in canonical form (`ak ≥ 2` when `k ≥ 1`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContinuedFraction {
    terms: Vec<BigUint>,
}

impl ContinuedFraction {
    pub fn new(terms: Vec<BigUint>) -> Result<Self, ArithError> {
        let bad = |why: &str| Err(ArithError::InvalidContinuedFraction(why.to_string()));
        if terms.is_empty() {
            return bad("no terms");
        }
        if terms[1..].iter().any(Zero::is_zero) {
            return bad("partial quotients after the first must be ≥ 1");
        }
        if terms.len() > 1 && terms.last().is_some_and(One::is_one) {
            return bad("a trailing 1 is not canonical");
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[BigUint] {
        &self.terms
    }

    /// Evaluates the expansion back to a fraction.
    pub fn evaluate(&self) -> Fraction {
        // Convergent recurrence h_k = a_k h_{k-1} + h_{k-2}.
        let (mut h0, mut h1) = (BigUint::zero(), BigUint::one());
        let (mut k0, mut k1) = (BigUint::one(), BigUint::zero());
        for a in &self.terms {
            let h = a * &h1 + &h0;
            let k = a * &k1 + &k0;
            (h0, h1) = (h1, h);
            (k0, k1) = (k1, k);
        }
        Fraction::from_coprime(h1, k1)
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.terms[0])?;
        for (i, a) in self.terms[1..].iter().enumerate() {
            write!(f, "{}{a}", if i == 0 { ';' } else { ',' })?;
        }
        write!(f, "]")
    }
}

impl FromStr for ContinuedFraction {
    type Err = ArithError;

    /// Parses `[a0;a1,...,ak]` or `[a0]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ArithError::InvalidContinuedFraction(s.to_string());
        let inner = s.trim().strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(err)?;
        let (head, tail) = inner.split_once(';').unwrap_or((inner, ""));
        let num = |t: &str| t.trim().parse::<BigUint>().map_err(|_| err());
        let mut terms = vec![num(head)?];
        if inner.contains(';') {
            for t in tail.split(',') {
                terms.push(num(t)?);
            }
        }
        Self::new(terms)
    }
}

/// Canonical expansion by Euclid's algorithm.
pub fn to_continued_fraction(f: &Fraction) -> Result<ContinuedFraction, ArithError> {
    if f.is_infinite() {
        return Err(ArithError::InfiniteExpansion);
    }
    let (mut a, mut b) = (f.num.clone(), f.den.clone());
    let mut terms = Vec::new();
    while !b.is_zero() {
        let (q, r) = a.div_rem(&b);
        terms.push(q);
        (a, b) = (b, r);
    }
    // The last division has a remainder strictly below its divisor, so its quotient is ≥ 2 whenever k ≥ 1.
    ContinuedFraction::new(terms)
}

/// One maximal same-direction block of a path.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Run {
    pub direction: Direction,
    pub exponent: BigUint,
}

/// A run-length encoded descent `L^{x1} R^{x2} …` from the bracket `(0/1, 1/1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SBPath {
    runs: Vec<Run>,
}

impl SBPath {
    /// Validates strict alternation and positive exponents.
    pub fn new(runs: Vec<Run>) -> Result<Self, ArithError> {
        if runs.iter().any(|r| r.exponent.is_zero()) {
            return Err(ArithError::InvalidPath("exponents must be ≥ 1".into()));
        }
        if runs.windows(2).any(|w| w[0].direction == w[1].direction) {
            return Err(ArithError::InvalidPath("directions must alternate".into()));
        }
        Ok(Self { runs })
    }

    /// Alternating runs starting with LEFT.
    pub fn from_exponents<I: IntoIterator<Item = BigUint>>(exponents: I) -> Result<Self, ArithError> {
        let mut dir = Direction::Left;
        let runs = exponents
            .into_iter()
            .map(|exponent| {
                let run = Run { direction: dir, exponent };
                dir = dir.flip();
                run
            })
            .collect();
        Self::new(runs)
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn exponents(&self) -> Vec<BigUint> {
        self.runs.iter().map(|r| r.exponent.clone()).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Compact letter form, e.g. `LRLRRR`. Allocates one char per step.
    pub fn to_compact(&self) -> String {
        let mut s = String::new();
        for r in &self.runs {
            let n = r.exponent.to_usize().expect("exponent too large for compact form");
            s.extend(std::iter::repeat_n(r.direction.letter(), n));
        }
        s
    }
}

impl fmt::Display for SBPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.runs.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}^{}", r.direction.letter(), r.exponent)?;
        }
        Ok(())
    }
}

impl FromStr for SBPath {
    type Err = ArithError;

    /// Accepts run form (`L^3 R^1`) or compact form (`LLLR`); adjacent
    /// equal letters in compact form merge into one run.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |why: &str| ArithError::InvalidPath(format!("{s:?}: {why}"));
        let letter = |c: char| match c {
            'L' => Ok(Direction::Left),
            'R' => Ok(Direction::Right),
            _ => Err(err("expected L or R")),
        };
        let mut runs: Vec<Run> = Vec::new();
        for token in s.split_whitespace() {
            if let Some((d, e)) = token.split_once('^') {
                let mut chars = d.chars();
                let dir = letter(chars.next().ok_or_else(|| err("missing direction"))?)?;
                if chars.next().is_some() {
                    return Err(err("one letter per run"));
                }
                let exponent = e.parse::<BigUint>().map_err(|_| err("bad exponent"))?;
                runs.push(Run { direction: dir, exponent });
            } else {
                for c in token.chars() {
                    let dir = letter(c)?;
                    match runs.last_mut() {
                        Some(r) if r.direction == dir => r.exponent += 1u32,
                        _ => runs.push(Run { direction: dir, exponent: BigUint::one() }),
                    }
                }
            }
        }
        Self::new(runs)
    }
}

/// `[0; a1, ..., ak] ↦ L^{a1} R^{a2} … D^{ak − 1}` (empty final run dropped).
pub fn cf_to_sb_path(cf: &ContinuedFraction) -> Result<SBPath, ArithError> {
    let terms = cf.terms();
    if !terms[0].is_zero() || terms.len() < 2 {
        return Err(ArithError::NotInUnitInterval(cf.to_string()));
    }
    let mut exps: Vec<BigUint> = terms[1..].to_vec();
    let last = exps.last_mut().expect("k ≥ 1");
    *last -= 1u32;
    if last.is_zero() {
        exps.pop();
    }
    SBPath::from_exponents(exps)
}

/// The fraction at the end of `path`, one closed-form jump per run.
pub fn sb_path_to_fraction(path: &SBPath) -> Fraction {
    let mut bracket = Bracket::unit();
    let mut node = Fraction::one();
    for run in &path.runs {
        node = bracket.step(run.direction, &run.exponent);
        bracket = bracket.descend(run.direction, &run.exponent);
    }
    node
}

/// Path of a fraction in `(0, 1)`.
pub fn fraction_to_sb_path(f: &Fraction) -> Result<SBPath, ArithError> {
    if f.is_infinite() || f.is_zero() || f >= &Fraction::one() {
        return Err(ArithError::FractionOutsideUnitInterval(f.clone()));
    }
    cf_to_sb_path(&to_continued_fraction(f)?)
}

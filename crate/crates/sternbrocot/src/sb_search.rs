//! Compressed Stern–Brocot search for a hidden rational in `(0, 1)`.
//!
//! Each maximal run of same-direction moves is located with an exponential
//! search over step counts `2^i − 1` followed by a binary search inside the
//! last gap, so a run of length `x` costs at most `2⌊log₂ x⌋ + 1` queries.
//! Equality is detected by the three-valued oracle and ends the search at
//! once, which makes the explicit equality checks free.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact_arith::{Bracket, Direction, Fraction};
use crate::oracles::{ComparisonOracle, ComparisonResult, OracleError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("denominator bound must be at least 2, got {0}")]
    BoundTooSmall(BigUint),
    #[error("hidden value is not a fraction with denominator ≤ {0}")]
    DenominatorBoundExceeded(BigUint),
    #[error("empty interval [{lo}, {hi}]")]
    EmptyInterval { lo: Fraction, hi: Fraction },
}

/// A Farey bracket together with the direction of the current run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBracket {
    pub bracket: Bracket,
    pub direction: Direction,
}

impl SearchBracket {
    pub fn new(low: Fraction, high: Fraction, direction: Direction) -> Self {
        Self { bracket: Bracket { low, high }, direction }
    }

    /// The node `t` steps into the run.
    pub fn probe(&self, t: &BigUint) -> Fraction {
        self.bracket.step(self.direction, t)
    }

    /// Whether a probe with this answer is at or past the hidden value.
    pub fn crosses(&self, r: ComparisonResult) -> bool {
        match self.direction {
            Direction::Left => r != ComparisonResult::Greater,
            Direction::Right => r != ComparisonResult::Less,
        }
    }

    /// Largest step count whose node has denominator ≤ `n`.
    pub fn step_cap(&self, n: &BigUint) -> BigUint {
        let (near, far) = match self.direction {
            Direction::Left => (&self.bracket.high, &self.bracket.low),
            Direction::Right => (&self.bracket.low, &self.bracket.high),
        };
        if n < near.den() {
            BigUint::zero()
        } else {
            (n - near.den()) / far.den()
        }
    }
}

/// Result of the exponential phase of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GallopOutcome {
    /// The probe at `hi` crossed and the probe at `lo` (or the bracket end, `lo = 0`) did not.
    Crossed { i: u32, lo: BigUint, hi: BigUint },
    /// The probe at `steps` equals the hidden value.
    Hit { i: u32, steps: BigUint, fraction: Fraction },
    /// No probe up to the cap crossed; `last` is the largest step probed.
    Exhausted { i: u32, last: BigUint },
}

/// Probes `2^1 − 1, 2^2 − 1, …` steps (clamped to `cap`) until one crosses.
pub fn exponential_search<O: ComparisonOracle>(
    oracle: &mut O,
    bracket: &SearchBracket,
    cap: Option<&BigUint>,
) -> Result<GallopOutcome, OracleError> {
    gallop_from(oracle, bracket, cap, 1, BigUint::zero())
}

/// Exponential phase starting at exponent `i` with `lo` known not to cross.
pub(crate) fn gallop_from<O: ComparisonOracle>(
    oracle: &mut O,
    bracket: &SearchBracket,
    cap: Option<&BigUint>,
    mut i: u32,
    mut lo: BigUint,
) -> Result<GallopOutcome, OracleError> {
    loop {
        let mut t = (BigUint::one() << i) - 1u32;
        if let Some(cap) = cap {
            if &lo >= cap {
                return Ok(GallopOutcome::Exhausted { i: i - 1, last: lo });
            }
            if &t > cap {
                t = cap.clone();
            }
        }
        let probe = bracket.probe(&t);
        let r = oracle.compare(&probe)?;
        if r == ComparisonResult::Equal {
            return Ok(GallopOutcome::Hit { i, steps: t, fraction: probe });
        }
        if bracket.crosses(r) {
            return Ok(GallopOutcome::Crossed { i, lo, hi: t });
        }
        lo = t;
        i += 1;
    }
}

/// Minimal `x ∈ (lo, hi]` whose probe crosses, given that `hi` crosses and
/// `lo` does not. Returns the hit fraction if a probe lands on the hidden value.
pub fn segment_binary_search<O: ComparisonOracle>(
    oracle: &mut O,
    bracket: &SearchBracket,
    lo: &BigUint,
    hi: &BigUint,
) -> Result<(BigUint, Option<Fraction>), OracleError> {
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    while &hi - &lo > BigUint::one() {
        let mid: BigUint = (&lo + &hi) >> 1u32;
        let probe = bracket.probe(&mid);
        let r = oracle.compare(&probe)?;
        if r == ComparisonResult::Equal {
            return Ok((mid, Some(probe)));
        }
        if bracket.crosses(r) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((hi, None))
}

/// One run of the descent.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Segment {
    pub direction: Direction,
    /// Run length `xᵢ`.
    #[serde(serialize_with = "ser_display")]
    pub x: BigUint,
    /// Denominator of the node `xᵢ` steps into the run.
    #[serde(serialize_with = "ser_display")]
    pub d: BigUint,
    /// Denominator of the node `xᵢ − 1` steps into the run.
    #[serde(serialize_with = "ser_display")]
    pub m: BigUint,
    /// Queries spent on this run.
    pub queries: u64,
    /// Bracket after the run.
    #[serde(skip)]
    pub bracket: Bracket,
}

fn ser_display<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Per-run record of a search.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct SearchTrace {
    pub segments: Vec<Segment>,
    pub total_queries: u64,
}

impl SearchTrace {
    pub fn exponents(&self) -> Vec<BigUint> {
        self.segments.iter().map(|s| s.x.clone()).collect()
    }

    /// CSV rows `segment,x,d,m,queries`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("segment,x,d,m,queries\n");
        for (i, s) in self.segments.iter().enumerate() {
            out.push_str(&format!("{},{},{},{},{}\n", i + 1, s.x, s.d, s.m, s.queries));
        }
        out
    }
}

/// Finds a hidden rational in `(0, 1)` with no denominator bound.
///
/// The oracle must hide a rational strictly between 0 and 1; otherwise the
/// search does not terminate.
pub fn rational_search_unbounded<O: ComparisonOracle>(
    oracle: &mut O,
) -> Result<(Fraction, SearchTrace), SearchError> {
    descend(oracle, None)
}

/// Finds a hidden rational in `(0, 1)` whose denominator is at most `n`,
/// never probing a fraction with a larger denominator.
pub fn rational_search_bounded<O: ComparisonOracle>(
    oracle: &mut O,
    n: &BigUint,
) -> Result<(Fraction, SearchTrace), SearchError> {
    if n < &BigUint::from(2u32) {
        return Err(SearchError::BoundTooSmall(n.clone()));
    }
    descend(oracle, Some(n))
}

fn descend<O: ComparisonOracle>(
    oracle: &mut O,
    bound: Option<&BigUint>,
) -> Result<(Fraction, SearchTrace), SearchError> {
    let mut sb = SearchBracket::new(Fraction::zero(), Fraction::one(), Direction::Left);
    let mut trace = SearchTrace::default();
    loop {
        let before = oracle.read_count();
        let cap = bound.map(|n| sb.step_cap(n));
        let (x, hit) = match gallop_from(oracle, &sb, cap.as_ref(), 1, BigUint::zero())? {
            GallopOutcome::Hit { steps, fraction, .. } => (steps, Some(fraction)),
            GallopOutcome::Crossed { lo, hi, .. } => segment_binary_search(oracle, &sb, &lo, &hi)?,
            GallopOutcome::Exhausted { .. } => {
                return Err(SearchError::DenominatorBoundExceeded(bound.expect("capped").clone()));
            }
        };
        let next = sb.bracket.descend(sb.direction, &x);
        let (node, prev) = match sb.direction {
            Direction::Left => (&next.low, &next.high),
            Direction::Right => (&next.high, &next.low),
        };
        trace.segments.push(Segment {
            direction: sb.direction,
            x,
            d: node.den().clone(),
            m: prev.den().clone(),
            queries: oracle.read_count() - before,
            bracket: next.clone(),
        });
        if let Some(found) = hit {
            trace.total_queries = trace.segments.iter().map(|s| s.queries).sum();
            return Ok((found, trace));
        }
        sb = SearchBracket { bracket: next, direction: sb.direction.flip() };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::RationalOracle;

    fn fr(s: &str) -> Fraction {
        s.parse().unwrap()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn exponential_examples() {
        let left = SearchBracket::new(fr("0/1"), fr("1/1"), Direction::Left);
        let mut o = RationalOracle::new(fr("1/5"));
        let out = exponential_search(&mut o, &left, None).unwrap();
        assert_eq!(out, GallopOutcome::Crossed { i: 3, lo: big(3), hi: big(7) });
        assert_eq!(o.read_count(), 3);

        let mut o = RationalOracle::new(fr("1/2"));
        let out = exponential_search(&mut o, &left, None).unwrap();
        assert_eq!(out, GallopOutcome::Hit { i: 1, steps: big(1), fraction: fr("1/2") });
        assert_eq!(o.read_count(), 1);

        let right = SearchBracket::new(fr("1/2"), fr("1/1"), Direction::Right);
        let mut o = RationalOracle::new(fr("9/14"));
        let out = exponential_search(&mut o, &right, None).unwrap();
        assert_eq!(out, GallopOutcome::Crossed { i: 1, lo: big(0), hi: big(1) });
    }

    #[test]
    fn exponential_respects_cap() {
        let left = SearchBracket::new(fr("0/1"), fr("1/1"), Direction::Left);
        let mut o = RationalOracle::new(fr("1/5"));
        let out = exponential_search(&mut o, &left, Some(&big(2))).unwrap();
        assert_eq!(out, GallopOutcome::Exhausted { i: 2, last: big(2) });
        let mut o = RationalOracle::new(fr("1/5"));
        let out = exponential_search(&mut o, &left, Some(&big(4))).unwrap();
        assert_eq!(out, GallopOutcome::Hit { i: 3, steps: big(4), fraction: fr("1/5") });
    }

    #[test]
    fn binary_examples() {
        let left = SearchBracket::new(fr("0/1"), fr("1/1"), Direction::Left);
        let mut o = RationalOracle::new(fr("1/5"));
        assert_eq!(segment_binary_search(&mut o, &left, &big(0), &big(1)).unwrap(), (big(1), None));
        assert_eq!(o.read_count(), 0);
        let (x, hit) = segment_binary_search(&mut o, &left, &big(3), &big(7)).unwrap();
        assert_eq!((x, hit), (big(4), Some(fr("1/5"))));
        assert!(o.read_count() <= 2);

        // 5/7 = L R^2 L^1: second run goes RIGHT from (1/2, 1/1) and has length 2.
        let right = SearchBracket::new(fr("1/2"), fr("1/1"), Direction::Right);
        let mut o = RationalOracle::new(fr("5/7"));
        let (x, _) = segment_binary_search(&mut o, &right, &big(1), &big(3)).unwrap();
        assert_eq!(x, big(2));
        assert!(o.read_count() <= 2);
    }

    #[test]
    fn unbounded_examples() {
        let mut o = RationalOracle::new(fr("9/14"));
        let (f, t) = rational_search_unbounded(&mut o).unwrap();
        assert_eq!(f, fr("9/14"));
        assert_eq!(t.exponents(), vec![big(1), big(1), big(1), big(3)]);
        assert_eq!(t.total_queries, o.read_count());

        let mut o = RationalOracle::new(fr("1/2"));
        let (f, t) = rational_search_unbounded(&mut o).unwrap();
        assert_eq!((f, t.total_queries), (fr("1/2"), 1));

        let mut o = RationalOracle::new(fr("113/355"));
        let (f, t) = rational_search_unbounded(&mut o).unwrap();
        assert_eq!(f, fr("113/355"));
        assert!((t.total_queries as f64) <= 2.5849 * 355f64.log2());
    }

    #[test]
    fn bounded_examples() {
        let n = big(1000);
        let mut o = RationalOracle::new(fr("1/1000"));
        let (f, tb) = rational_search_bounded(&mut o, &n).unwrap();
        assert_eq!(f, fr("1/1000"));
        let mut o = RationalOracle::new(fr("1/1000"));
        let (_, tu) = rational_search_unbounded(&mut o).unwrap();
        assert!(tb.total_queries < tu.total_queries);

        let mut o = RationalOracle::new(fr("1/2"));
        let (f, t) = rational_search_bounded(&mut o, &big(2)).unwrap();
        assert_eq!((f, t.total_queries), (fr("1/2"), 1));

        let mut o = RationalOracle::new(fr("1/2"));
        assert_eq!(rational_search_bounded(&mut o, &big(1)), Err(SearchError::BoundTooSmall(big(1))));

        let mut o = RationalOracle::new(fr("1/7"));
        assert!(matches!(
            rational_search_bounded(&mut o, &big(5)),
            Err(SearchError::DenominatorBoundExceeded(_))
        ));
    }

    #[test]
    fn trace_csv() {
        let mut o = RationalOracle::new(fr("9/14"));
        let (_, t) = rational_search_unbounded(&mut o).unwrap();
        let csv = t.to_csv();
        assert!(csv.starts_with("segment,x,d,m,queries\n1,1,2,1,1\n"));
        assert!(csv.ends_with("4,3,14,11,2\n"));
    }
}

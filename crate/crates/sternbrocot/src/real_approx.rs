//! Best rational approximation of a hidden positive real from comparison queries.
//!
//! The descent runs over the generalized tree between `0/1` and `1/0`. Each
//! run is located exactly as in [`crate::sb_search`]; afterwards two shifted
//! queries test whether the last two nodes of the run lie within `δ` of `α`.
//! The first node of the descent inside `[α − δ, α + δ]` is the fraction of
//! least denominator there, and along one run the in-range nodes on the far
//! side of `α` form a suffix, so a binary search finds the shallowest one.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact_arith::{Bracket, Direction, Fraction};
use crate::km_search::smallest_denominator_in_interval;
use crate::oracles::{ComparisonOracle, ComparisonResult, OracleError, RealKind};
use crate::sb_search::{gallop_from, segment_binary_search, GallopOutcome, SearchBracket};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApproxError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("approximation radius must be positive")]
    NonPositiveDelta,
    #[error("enclosure width {width} exceeds half the radius {delta}")]
    EnclosureTooWide { width: Fraction, delta: Fraction },
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Approximation {
    pub fraction: Fraction,
    pub queries: u64,
}

/// Side of `α` a node lies on, seen from the current run.
#[derive(Clone, Copy)]
enum Side {
    /// At or past `α` in the run direction (`f ≤ α` going LEFT, `f ≥ α` going RIGHT).
    Near,
    /// Not yet past `α`.
    Far,
}

/// One shifted query: is `node` within `δ` of `α`?
fn in_range<O: ComparisonOracle>(
    oracle: &mut O,
    dir: Direction,
    side: Side,
    node: &Fraction,
    delta: &Fraction,
) -> Result<bool, OracleError> {
    // Nodes below α need node + δ ≥ α; nodes above α need node − δ ≤ α.
    let below = matches!((dir, side), (Direction::Left, Side::Near) | (Direction::Right, Side::Far));
    if below {
        let r = oracle.compare(&node.add(delta))?;
        Ok(r != ComparisonResult::Less)
    } else {
        match node.checked_sub(delta) {
            // node − δ < 0 < α: in range without asking.
            None => Ok(true),
            Some(shifted) => Ok(oracle.compare(&shifted)? != ComparisonResult::Greater),
        }
    }
}

/// Smallest `z ∈ (0, hi]` whose far-side node is in range, given that `hi` is.
fn shallowest_in_range<O: ComparisonOracle>(
    oracle: &mut O,
    sb: &SearchBracket,
    hi: &BigUint,
    delta: &Fraction,
) -> Result<Fraction, OracleError> {
    let (mut lo, mut hi) = (BigUint::zero(), hi.clone());
    while &hi - &lo > BigUint::one() {
        let mid: BigUint = (&lo + &hi) >> 1u32;
        if in_range(oracle, sb.direction, Side::Far, &sb.probe(&mid), delta)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(sb.probe(&hi))
}

/// Fraction of least denominator in `[α − δ, α + δ] ∩ (0, ∞)`.
pub fn approximate_unknown<O: ComparisonOracle>(
    oracle: &mut O,
    delta: &Fraction,
) -> Result<Approximation, ApproxError> {
    if delta.is_zero() || delta.is_infinite() {
        return Err(ApproxError::NonPositiveDelta);
    }
    let before = oracle.read_count();
    let fraction = descend(oracle, delta)?;
    Ok(Approximation { fraction, queries: oracle.read_count() - before })
}

fn descend<O: ComparisonOracle>(oracle: &mut O, delta: &Fraction) -> Result<Fraction, OracleError> {
    // The first probe, 1/1, is shared by both directions out of (0/1, 1/0).
    let root = Bracket::positive();
    let one = BigUint::one();
    let first = oracle.compare(&Fraction::one())?;
    if first == ComparisonResult::Equal {
        return Ok(Fraction::one());
    }
    let dir = if first == ComparisonResult::Greater { Direction::Left } else { Direction::Right };
    let mut sb = SearchBracket { bracket: root, direction: dir };
    let mut outcome = gallop_from(oracle, &sb, None, 2, one)?;
    loop {
        let x = match outcome {
            GallopOutcome::Hit { steps, .. } => {
                // α is the node itself; the shallowest in-range node precedes or equals it.
                return shallowest_in_range(oracle, &sb, &steps, delta);
            }
            GallopOutcome::Crossed { lo, hi, .. } => {
                let (x, hit) = segment_binary_search(oracle, &sb, &lo, &hi)?;
                if hit.is_some() {
                    return shallowest_in_range(oracle, &sb, &x, delta);
                }
                x
            }
            GallopOutcome::Exhausted { .. } => unreachable!("no cap on the real descent"),
        };
        let near = sb.probe(&x);
        let near_in = in_range(oracle, sb.direction, Side::Near, &near, delta)?;
        // Step 0 is a bracket endpoint that an earlier run already rejected.
        let prev = &x - 1u32;
        let far_in = !prev.is_zero() && in_range(oracle, sb.direction, Side::Far, &sb.probe(&prev), delta)?;
        if far_in {
            return shallowest_in_range(oracle, &sb, &prev, delta);
        }
        if near_in {
            return Ok(near);
        }
        sb = SearchBracket { bracket: sb.bracket.descend(sb.direction, &x), direction: sb.direction.flip() };
        outcome = gallop_from(oracle, &sb, None, 1, BigUint::zero())?;
    }
}

/// Runs [`approximate_unknown`] and reports only the number of queries.
pub fn approx_query_count<O: ComparisonOracle>(oracle: &mut O, delta: &Fraction) -> Result<u64, ApproxError> {
    Ok(approximate_unknown(oracle, delta)?.queries)
}

/// Least-denominator positive fraction in `[lo, hi]`, `lo` possibly ≤ 0 (given as `None`).
fn smallest_positive(lo: Option<&Fraction>, hi: &Fraction) -> Fraction {
    match lo {
        Some(lo) if !lo.is_zero() => smallest_denominator_in_interval(lo, hi).expect("lo ≤ hi"),
        _ if hi >= &Fraction::one() => Fraction::one(),
        // 1/q ≤ hi for q = ⌈1/hi⌉
        _ => Fraction::new(BigUint::one(), hi.recip().ceil()).expect("hi > 0"),
    }
}

/// Known-value best approximation: the least-denominator fraction within `δ`
/// of a real enclosed by `[value_lo, value_hi]` (equal endpoints for rationals).
///
/// Searches `[value_hi − δ, value_lo + δ]`, the part of the target interval
/// that is certain for every real in the enclosure.
pub fn best_approx_known(value_lo: &Fraction, value_hi: &Fraction, delta: &Fraction) -> Result<Fraction, ApproxError> {
    if delta.is_zero() || delta.is_infinite() {
        return Err(ApproxError::NonPositiveDelta);
    }
    let width = value_hi.abs_diff(value_lo);
    let half = Fraction::new(delta.num().clone(), delta.den() * 2u32).expect("non-zero");
    if width > half {
        return Err(ApproxError::EnclosureTooWide { width, delta: delta.clone() });
    }
    let (lo, hi) = if value_lo <= value_hi { (value_lo, value_hi) } else { (value_hi, value_lo) };
    Ok(smallest_positive(hi.checked_sub(delta).as_ref(), &lo.add(delta)))
}

/// Known-value best approximation of a named real, refining its enclosure
/// until the inner and outer candidate intervals agree.
pub fn best_approx_certified(kind: &RealKind, delta: &Fraction) -> Result<Fraction, ApproxError> {
    if delta.is_zero() || delta.is_infinite() {
        return Err(ApproxError::NonPositiveDelta);
    }
    if let Some(r) = kind.as_rational() {
        return best_approx_known(&r, &r, delta);
    }
    let mut bits = 2 * delta.den().bits() + 32;
    loop {
        let enc = kind.enclosure(bits);
        let (lo, hi) = (enc.lower(), enc.upper());
        let inner = best_approx_known(&lo, &hi, delta)?;
        let outer = smallest_positive(lo.checked_sub(delta).as_ref(), &hi.add(delta));
        if inner == outer {
            return Ok(inner);
        }
        bits *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{RationalOracle, RealOracle};

    fn fr(s: &str) -> Fraction {
        s.parse().unwrap()
    }

    fn approx(target: &str, k: u32) -> Approximation {
        let mut o: RealOracle = target.parse().unwrap();
        approximate_unknown(&mut o, &Fraction::pow10_neg(k)).unwrap()
    }

    #[test]
    fn approximation_examples() {
        assert_eq!(approx("pi", 2).fraction, fr("22/7"));
        assert_eq!(approx("pi", 5).fraction, fr("355/113"));
        assert_eq!(approx("sqrt:2", 4).fraction, fr("99/70"));
        assert_eq!(approx("pi", 1).fraction, fr("16/5"));
        assert_eq!(approx("e", 3).fraction, fr("87/32"));
    }

    #[test]
    fn rational_targets() {
        let mut o = RationalOracle::new(fr("2/3"));
        let a = approximate_unknown(&mut o, &fr("1/10")).unwrap();
        assert_eq!(a.fraction, fr("2/3"));
        assert_eq!(a.queries, o.read_count());
        let mut o = RationalOracle::new(fr("7/1"));
        assert_eq!(approximate_unknown(&mut o, &fr("1/100")).unwrap().fraction, fr("7/1"));
        let mut o = RationalOracle::new(fr("1/1000"));
        assert_eq!(approximate_unknown(&mut o, &fr("1/2")).unwrap().fraction, fr("1/2"));
        let mut o = RationalOracle::new(fr("1/1"));
        assert!(approximate_unknown(&mut o, &Fraction::zero()).is_err());
    }

    #[test]
    fn known_value_examples() {
        // Brute force: q = 1, 2, …, p = round(q·2/3) until |p/q − 2/3| ≤ 1/10.
        let r = fr("2/3");
        let expected = (1u64..)
            .find_map(|q| {
                let p = (2 * q + 1) / 3;
                let f = Fraction::from_u64(p, q).unwrap();
                (f.abs_diff(&r) <= fr("1/10")).then_some(f)
            })
            .unwrap();
        assert_eq!(best_approx_known(&r, &r, &fr("1/10")).unwrap(), expected);
        let enc = RealKind::Pi.enclosure(128);
        assert_eq!(best_approx_known(&enc.lower(), &enc.upper(), &fr("1/10")).unwrap(), fr("16/5"));
        let x = fr("17/29");
        let tiny = Fraction::from_u64(1, 2 * 29 * 29 + 1).unwrap();
        assert_eq!(best_approx_known(&x, &x, &tiny).unwrap(), x);
        assert!(best_approx_known(&fr("1/3"), &fr("1/2"), &fr("1/10")).is_err());
        assert_eq!(best_approx_certified(&RealKind::Sqrt(2), &Fraction::pow10_neg(4)).unwrap(), fr("99/70"));
    }

    #[test]
    fn query_count_is_counter_delta() {
        let mut o: RealOracle = "sqrt:2".parse().unwrap();
        let q = approx_query_count(&mut o, &Fraction::pow10_neg(1)).unwrap();
        assert_eq!(q, o.read_count());
    }
}

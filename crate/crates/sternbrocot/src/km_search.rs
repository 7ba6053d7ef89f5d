//! Kwek–Mehlhorn bounded search and the smallest-denominator routine.
//!
//! Phase 1 binary-searches a uniform grid until the hidden value is pinned to
//! one cell; phase 2 extracts, without further queries, the only fraction with
//! denominator ≤ n in that cell. Two distinct fractions with denominators ≤ n
//! differ by more than `1/(2n²)`, so a closed cell of that width holds at most one.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::exact_arith::Fraction;
use crate::oracles::{ComparisonOracle, ComparisonResult};
use crate::sb_search::SearchError;

/// The closed cell `[mu/cells, (mu+1)/cells]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridInterval {
    pub mu: BigUint,
    pub cells: BigUint,
}

impl GridInterval {
    pub fn lower(&self) -> Fraction {
        Fraction::new(self.mu.clone(), self.cells.clone()).expect("cells > 0")
    }

    pub fn upper(&self) -> Fraction {
        Fraction::new(&self.mu + 1u32, self.cells.clone()).expect("cells > 0")
    }

    pub fn contains(&self, f: &Fraction) -> bool {
        &self.lower() <= f && f <= &self.upper()
    }
}

/// Number of grid cells used for denominator bound `n`: `2n²`.
pub fn grid_cells(n: &BigUint) -> BigUint {
    n * n * 2u32
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Phase1 {
    Cell(GridInterval),
    ExactHit(Fraction),
}

/// Binary search over the `2n²` grid of `[0, 1]`.
pub fn km_phase1<O: ComparisonOracle>(oracle: &mut O, n: &BigUint) -> Result<Phase1, SearchError> {
    if n < &BigUint::from(2u32) {
        return Err(SearchError::BoundTooSmall(n.clone()));
    }
    let cells = grid_cells(n);
    let (mut lo, mut hi) = (BigUint::zero(), cells.clone());
    while &hi - &lo > BigUint::one() {
        let mid: BigUint = (&lo + &hi) >> 1u32;
        let probe = Fraction::new(mid.clone(), cells.clone()).expect("cells > 0");
        match oracle.compare(&probe)? {
            ComparisonResult::Equal => return Ok(Phase1::ExactHit(probe)),
            ComparisonResult::Less => lo = mid,
            ComparisonResult::Greater => hi = mid,
        }
    }
    Ok(Phase1::Cell(GridInterval { mu: lo, cells }))
}

/// The fraction of least denominator in the closed interval `[lo, hi]`
/// (least numerator among those), found by continued-fraction jumps.
pub fn smallest_denominator_in_interval(lo: &Fraction, hi: &Fraction) -> Result<Fraction, SearchError> {
    assert!(!lo.is_infinite() && !hi.is_infinite(), "interval endpoints must be finite");
    if lo > hi {
        return Err(SearchError::EmptyInterval { lo: lo.clone(), hi: hi.clone() });
    }
    Ok(simplest_between(lo.num(), lo.den(), hi.num(), hi.den()))
}

/// Simplest fraction in `[a/b, c/d]`, `a/b ≤ c/d`, all positive denominators.
fn simplest_between(a: &BigUint, b: &BigUint, c: &BigUint, d: &BigUint) -> Fraction {
    // Convergent matrix: value = (p1·y + p0) / (q1·y + q0) where y is the
    // simplest fraction of the transformed interval.
    let (mut p0, mut p1) = (BigUint::zero(), BigUint::one());
    let (mut q0, mut q1) = (BigUint::one(), BigUint::zero());
    let (mut a, mut b, mut c, mut d) = (a.clone(), b.clone(), c.clone(), d.clone());
    loop {
        let (fl, ra) = a.div_rem(&b);
        let finish = |y: BigUint| {
            Fraction::new(&p1 * &y + &p0, &q1 * &y + &q0).expect("non-zero denominator")
        };
        if ra.is_zero() {
            // lo is an integer: nothing smaller fits.
            return finish(fl);
        }
        let next = &fl + 1u32;
        // next ≤ c/d ?
        if &next * &d <= c {
            return finish(next);
        }
        // Both endpoints lie in (fl, fl + 1): recurse on [1/(c/d − fl), 1/(a/b − fl)].
        let rc = &c - &fl * &d;
        (p0, p1) = (p1.clone(), &fl * &p1 + &p0);
        (q0, q1) = (q1.clone(), &fl * &q1 + &q0);
        (a, b, c, d) = (d, rc, b, ra);
    }
}

/// Two-phase search; returns the hidden fraction and the number of queries.
pub fn km_search<O: ComparisonOracle>(oracle: &mut O, n: &BigUint) -> Result<(Fraction, u64), SearchError> {
    let before = oracle.read_count();
    let result = match km_phase1(oracle, n)? {
        Phase1::ExactHit(f) => f,
        Phase1::Cell(cell) => smallest_denominator_in_interval(&cell.lower(), &cell.upper())?,
    };
    Ok((result, oracle.read_count() - before))
}

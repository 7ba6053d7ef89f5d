//! Brute-force reference implementations on machine integers, written
//! independently of the library's algorithms.

#![allow(dead_code)]

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use sternbrocot::oracles::{ComparisonResult, OracleError};
use sternbrocot::{ComparisonOracle, Fraction, RationalOracle};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn frac(a: u64, b: u64) -> Fraction {
    Fraction::from_u64(a, b).unwrap()
}

pub fn to_pair(f: &Fraction) -> (u128, u128) {
    (f.num().to_u128().unwrap(), f.den().to_u128().unwrap())
}

/// Every reduced `a/b` with `1 ≤ a < b ≤ max_b`.
pub fn reduced_unit_fractions(max_b: u64) -> impl Iterator<Item = (u64, u64)> {
    (2..=max_b).flat_map(|b| (1..b).filter(move |&a| gcd(a, b) == 1).map(move |a| (a, b)))
}

/// Tree path by walking one mediant at a time from `1/1` between `0/1` and `1/0`.
pub fn walk_path(a: u64, b: u64) -> String {
    let (mut lo, mut hi, mut node) = ((0u64, 1u64), (1u64, 0u64), (1u64, 1u64));
    let mut path = String::new();
    while node != (a, b) {
        // a/b < node  ⇔  a·node.1 < node.0·b
        if u128::from(a) * u128::from(node.1) < u128::from(node.0) * u128::from(b) {
            path.push('L');
            hi = node;
        } else {
            path.push('R');
            lo = node;
        }
        node = (lo.0 + hi.0, lo.1 + hi.1);
    }
    path
}

/// Continued fraction by repeated division.
pub fn cf_terms(mut a: u64, mut b: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while b != 0 {
        out.push(a / b);
        (a, b) = (b, a % b);
    }
    out
}

/// Least-denominator positive `p/q` with `|p/q − n/d| ≤ δn/δd`, scanning `q = 1, 2, …`.
pub fn brute_best_approx(n: u128, d: u128, dn: u128, dd: u128) -> (u128, u128) {
    // p/q ∈ [n/d − dn/dd, n/d + dn/dd]  ⇔  (n·dd − dn·d)·q ≤ p·d·dd ≤ (n·dd + dn·d)·q
    let scale = d * dd;
    let lo = n as i128 * dd as i128 - dn as i128 * d as i128;
    let hi = n * dd + dn * d;
    for q in 1u128.. {
        let p_min = if lo <= 0 { 1 } else { (lo as u128 * q).div_ceil(scale).max(1) };
        if p_min * scale <= hi * q {
            return (p_min, q);
        }
    }
    unreachable!()
}

/// Least-denominator `p/q` in `[ln/ld, hn/hd]` (`p ≥ 0`).
pub fn brute_smallest_in(ln: u128, ld: u128, hn: u128, hd: u128) -> (u128, u128) {
    for q in 1u128.. {
        let p = (ln * q).div_ceil(ld);
        if p * hd <= hn * q {
            return (p, q);
        }
    }
    unreachable!()
}

/// Rational oracle that also records the largest probe denominator.
pub struct WatchedOracle {
    pub inner: RationalOracle,
    pub max_probe_den: BigUint,
    pub probes: Vec<Fraction>,
}

impl WatchedOracle {
    pub fn new(hidden: Fraction) -> Self {
        Self { inner: RationalOracle::new(hidden), max_probe_den: BigUint::default(), probes: Vec::new() }
    }
}

impl ComparisonOracle for WatchedOracle {
    fn compare(&mut self, beta: &Fraction) -> Result<ComparisonResult, OracleError> {
        if beta.den() > &self.max_probe_den {
            self.max_probe_den = beta.den().clone();
        }
        self.probes.push(beta.clone());
        self.inner.compare(beta)
    }

    fn read_count(&self) -> u64 {
        self.inner.read_count()
    }

    fn reset_count(&mut self) {
        self.inner.reset_count()
    }
}

/// `2⌊log₂ x⌋ + 1` by repeated halving.
pub fn budget(x: u64) -> u64 {
    let (mut k, mut y) = (0, x);
    while y > 1 {
        y /= 2;
        k += 1;
    }
    2 * k + 1
}

/// Checks the per-run recurrences `dᵢ = dᵢ₋₁ + xᵢmᵢ₋₁`, `mᵢ = dᵢ₋₁ + (xᵢ − 1)mᵢ₋₁`
/// (from `d₀ = m₀ = 1`), `2mᵢ ≥ dᵢ`, and unit determinant of every bracket.
pub fn check_trace(trace: &sternbrocot::sb_search::SearchTrace) -> Result<(), String> {
    let (mut d, mut m) = (BigUint::from(1u32), BigUint::from(1u32));
    for (i, s) in trace.segments.iter().enumerate() {
        let nd = &d + &s.x * &m;
        let nm = &d + (&s.x - 1u32) * &m;
        if s.d != nd || s.m != nm {
            return Err(format!("segment {}: (d, m) = ({}, {}), expected ({nd}, {nm})", i + 1, s.d, s.m));
        }
        if &s.m * 2u32 < s.d {
            return Err(format!("segment {}: m/d = {}/{} < 1/2", i + 1, s.m, s.d));
        }
        if s.bracket.determinant() != 1.into() {
            return Err(format!("segment {}: determinant {}", i + 1, s.bracket.determinant()));
        }
        (d, m) = (nd, nm);
    }
    Ok(())
}

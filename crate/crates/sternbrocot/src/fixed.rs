//! Binary fixed-point reals with a few hundred fractional bits.
//!
//! Used to render constants and growth rates to 50+ digits. Every operation
//! truncates, so results carry an error of a few units in the last place;
//! nothing here feeds an inequality verdict.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Fractional bits carried by every [`Fixed`].
pub const FRAC_BITS: u64 = 384;

/// `m / 2^FRAC_BITS`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fixed {
    m: BigInt,
}

impl Fixed {
    pub fn from_int(n: i64) -> Self {
        Self { m: BigInt::from(n) << FRAC_BITS }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "division by zero");
        Self { m: (BigInt::from(num) << FRAC_BITS) / den }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { m: &self.m + &o.m }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self { m: &self.m - &o.m }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self { m: (&self.m * &o.m) >> FRAC_BITS }
    }

    pub fn div(&self, o: &Self) -> Self {
        assert!(!o.m.is_zero(), "division by zero");
        Self { m: (&self.m << FRAC_BITS) / &o.m }
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.m.is_negative(), "square root of a negative number");
        Self { m: (&self.m << FRAC_BITS).sqrt() }
    }

    /// `log₂ self` by repeated squaring, one bit per step.
    pub fn log2(&self) -> Self {
        assert!(self.m.is_positive(), "logarithm of a non-positive number");
        let one = BigInt::one() << FRAC_BITS;
        let two = BigInt::from(2) << FRAC_BITS;
        // Normalize to y ∈ [1, 2).
        let e = self.m.bits() as i64 - 1 - FRAC_BITS as i64;
        let mut y = if e >= 0 { &self.m >> e as u64 } else { &self.m << (-e) as u64 };
        let mut frac = BigInt::zero();
        for _ in 0..FRAC_BITS {
            y = (&y * &y) >> FRAC_BITS;
            frac <<= 1;
            if y >= two {
                y >>= 1;
                frac += 1;
            }
        }
        debug_assert!(y >= one);
        Self { m: (BigInt::from(e) << FRAC_BITS) + frac }
    }

    pub fn to_f64(&self) -> f64 {
        let shift = FRAC_BITS.saturating_sub(60);
        (&self.m >> shift).to_f64().unwrap_or(f64::NAN) / 2f64.powi((FRAC_BITS - shift) as i32)
    }

    /// Decimal rendering rounded half-up to `digits` places.
    pub fn to_decimal(&self, digits: usize) -> String {
        let neg = self.m.is_negative();
        let abs = self.m.abs().to_biguint().expect("non-negative");
        let scale = BigUint::from(10u32).pow(digits as u32);
        let scaled = (abs * &scale * 2u32 + (BigUint::one() << FRAC_BITS)) >> (FRAC_BITS + 1);
        let int = &scaled / &scale;
        let frac = &scaled % &scale;
        let sign = if neg && !scaled.is_zero() { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac:0>digits$}")
        }
    }

    /// Decimal rendering truncated toward `−∞` (`up = false`) or `+∞` (`up = true`).
    pub fn to_decimal_directed(&self, digits: usize, up: bool) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = &self.m * &scale;
        let one = BigInt::one() << FRAC_BITS;
        let (q, r) = (scaled.div_floor(&one), scaled.mod_floor(&one));
        let q = if up && !r.is_zero() { q + 1 } else { q };
        let neg = q.is_negative();
        let abs = q.abs();
        let scale = scale.to_biguint().expect("positive");
        let abs = abs.to_biguint().expect("non-negative");
        let (int, frac) = (&abs / &scale, &abs % &scale);
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac:0>digits$}")
        }
    }

    /// `|self − o| < 2^-bits`.
    pub fn close_to(&self, o: &Self, bits: u64) -> bool {
        let diff = (&self.m - &o.m).abs();
        diff.cmp(&(BigInt::one() << (FRAC_BITS - bits))) == Ordering::Less
    }

    pub fn is_positive(&self) -> bool {
        self.m.sign() == Sign::Plus
    }
}

impl fmt::Display for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(f.precision().unwrap_or(50)))
    }
}

impl fmt::Debug for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20))
    }
}

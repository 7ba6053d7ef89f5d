//! Rational identification and best rational approximation from comparison
//! queries, by compressed descent through the Stern–Brocot tree.
//!
//! * [`exact_arith`]: exact fractions, continued fractions, tree paths.
//! * [`oracles`]: three-valued comparison oracles for hidden rationals and reals.
//! * [`sb_search`]: compressed Stern–Brocot search, unbounded and bounded.
//! * [`km_search`]: grid-then-simplest-fraction baseline search.
//! * [`real_approx`]: least-denominator approximation within `δ` of a hidden real.
//! * [`bound_analysis`]: exhaustive verification of the query-count inequalities.
//! * [`bench`]: seeded benchmarks and table generation.

pub mod bench;
pub mod bound_analysis;
pub mod exact_arith;
pub mod fixed;
pub mod km_search;
pub mod oracles;
pub mod real_approx;
pub mod sb_search;

pub use exact_arith::{Direction, Fraction, SBPath};
pub use oracles::{ComparisonOracle, ComparisonResult, RationalOracle, RealKind, RealOracle};

//! Best rational approximations of π, e, √2 and √5 from comparison queries,
//! checked against the known-value routine.
//!
//! ```bash
//! cargo run --release --example approximate_constants
//! ```

use sternbrocot::real_approx::{approximate_unknown, best_approx_certified};
use sternbrocot::{Fraction, RealKind, RealOracle};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for kind in [RealKind::Pi, RealKind::E, RealKind::Sqrt(2), RealKind::Sqrt(5)] {
        println!("{kind}");
        for k in [1, 3, 5, 9, 15] {
            let delta = Fraction::pow10_neg(k);
            let mut oracle = RealOracle::new(kind.clone());
            let a = approximate_unknown(&mut oracle, &delta)?;
            let known = best_approx_certified(&kind, &delta)?;
            assert_eq!(a.fraction, known);
            println!("  1e-{k:<2} {:>20}  {:>3} queries", a.fraction.to_string(), a.queries);
        }
    }
    Ok(())
}

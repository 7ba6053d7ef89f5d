//! Exhaustive check of the per-run query inequality: thresholds, base-case
//! scans and the four-run inductive step, plus the headline constants.
//!
//! ```bash
//! cargo run --release --example verify_bounds
//! ```

use sternbrocot::bound_analysis::{threshold, verify_tuple_inequality, BoundConstant, ScanMode};
use sternbrocot::Fraction;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for c in [BoundConstant::OneRun, BoundConstant::TwoRun, BoundConstant::FourRun, BoundConstant::LowerBound] {
        println!("{:<22} = {}", c.expression(), c.value().to_decimal(30));
    }
    let c = Fraction::parse_decimal("2.5849")?;
    let mut scans: Vec<_> = (1..=4).map(|k| (k, ScanMode::BaseCase)).collect();
    scans.push((4, ScanMode::InductiveStep));
    for (k, mode) in scans {
        let top = threshold(&c, k as u32, mode)?;
        let r = verify_tuple_inequality(k, top, &c, mode)?;
        println!(
            "{mode} k={k} top={top:>4}: {:>6} tuples, {} violations, argmax {:?}, critical {}",
            r.tuples_checked,
            r.violations.len(),
            r.argmax_tuple,
            r.critical_constant().to_decimal_directed(6, true)
        );
    }
    Ok(())
}

//! Identifying a hidden rational with the compressed tree search, with and
//! without a denominator bound, and printing the per-run trace.
//!
//! ```bash
//! cargo run --example identify_rational
//! ```

use num_bigint::BigUint;
use sternbrocot::sb_search::{rational_search_bounded, rational_search_unbounded};
use sternbrocot::{ComparisonOracle, Fraction, RationalOracle};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let hidden: Fraction = "9/14".parse()?;
    let mut oracle = RationalOracle::new(hidden.clone());
    let (found, trace) = rational_search_unbounded(&mut oracle)?;
    println!("found {found} with {} queries", oracle.read_count());
    print!("{}", trace.to_csv());

    // A known bound lets the search stop galloping at the bound.
    let hidden: Fraction = "1/1000".parse()?;
    let mut free = RationalOracle::new(hidden.clone());
    rational_search_unbounded(&mut free)?;
    let mut capped = RationalOracle::new(hidden);
    let (found, _) = rational_search_bounded(&mut capped, &BigUint::from(1000u32))?;
    println!("{found}: unbounded {} queries, bounded {}", free.read_count(), capped.read_count());
    Ok(())
}

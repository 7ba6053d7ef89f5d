//! Grid-then-simplest-fraction search, compared with the compressed search on
//! the same targets.
//!
//! ```bash
//! cargo run --example kwek_mehlhorn
//! ```

use num_bigint::BigUint;
use sternbrocot::km_search::{km_search, smallest_denominator_in_interval};
use sternbrocot::sb_search::rational_search_unbounded;
use sternbrocot::{Fraction, RationalOracle};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = BigUint::from(1000u32);
    println!("{:>8} {:>4} {:>4}", "target", "km", "csb");
    for s in ["1/2", "1/999", "377/610", "500/999", "997/998"] {
        let hidden: Fraction = s.parse()?;
        let (found, km) = km_search(&mut RationalOracle::new(hidden.clone()), &n)?;
        assert_eq!(found, hidden);
        let (_, trace) = rational_search_unbounded(&mut RationalOracle::new(hidden))?;
        println!("{s:>8} {km:>4} {:>4}", trace.total_queries);
    }
    let simplest = smallest_denominator_in_interval(&"3/10".parse()?, &"17/50".parse()?)?;
    println!("simplest fraction in [3/10, 17/50]: {simplest}");
    Ok(())
}

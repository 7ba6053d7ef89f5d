//! Converting between fractions, continued fractions and tree paths.
//!
//! ```bash
//! cargo run --example path_codecs
//! ```

use sternbrocot::exact_arith::{cf_to_sb_path, fraction_to_sb_path, sb_path_to_fraction, to_continued_fraction};
use sternbrocot::{Fraction, SBPath};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for s in ["1/2", "2/5", "5/12", "9/14", "355/1130"] {
        let f: Fraction = s.parse()?;
        let cf = to_continued_fraction(&f)?;
        let path = cf_to_sb_path(&cf)?;
        assert_eq!(path, fraction_to_sb_path(&f)?);
        assert_eq!(sb_path_to_fraction(&path), f);
        println!("{:>9}  cf {:<16}  path {:<22} compact {}", f.to_string(), cf.to_string(), path.to_string(), path.to_compact());
    }
    let path: SBPath = "LRLRRR".parse()?;
    println!("LRLRRR -> {}", sb_path_to_fraction(&path));
    Ok(())
}

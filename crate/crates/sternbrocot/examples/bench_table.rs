//! A small seeded benchmark: query statistics for both search algorithms,
//! written as CSV and plot data to stdout.
//!
//! ```bash
//! cargo run --release --example bench_table
//! ```

use std::io;

use sternbrocot::bench::{emit_csv, emit_plot_data, run_search_sweep, Algorithm, TrialPlan};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let plan = TrialPlan { trials: 300, seed: 7 };
    let records = run_search_sweep(&plan, 6, &[Algorithm::Km, Algorithm::Csb])?;
    for r in &records {
        r.check()?;
    }
    emit_csv(&records, io::stdout())?;
    println!();
    emit_plot_data(&records, io::stdout())?;
    Ok(())
}

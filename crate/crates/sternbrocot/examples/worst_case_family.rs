//! The alternating family (LᵃRᵇ)ᵏ: per-pair query coefficients and the
//! measured cost of searching for its members.
//!
//! ```bash
//! cargo run --release --example worst_case_family
//! ```

use sternbrocot::bound_analysis::{comparisons_coefficient, growth_rates, measure_family, worst_pair};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (a, b) in [(1, 1), (2, 1), (4, 2), (8, 1), (16, 1)] {
        let (pa, pb) = growth_rates(a, b);
        println!("({a},{b}) φa={pa:.8} φb={pb:.8} coefficient={:.8}", comparisons_coefficient(a, b));
    }
    let w = worst_pair(200);
    println!("worst pair up to 200: ({}, {}) -> {:.10}", w.a, w.b, w.coefficient);
    for k in [5, 10, 20] {
        for (a, b) in [(8, 1), (1, 8)] {
            let m = measure_family(a, b, k)?;
            println!("(L^{a} R^{b})^{k}: {} queries, ratio {:.4}", m.queries, m.ratio);
        }
    }
    Ok(())
}

mod common;

use common::*;
use num_bigint::BigUint;
use proptest::prelude::*;
use sternbrocot::bench::TrialPlan;
use sternbrocot::bound_analysis::{growth_rates, run_coefficients, worst_case_fraction};
use sternbrocot::exact_arith::{
    cf_to_sb_path, fraction_to_sb_path, mediant, sb_path_to_fraction, to_continued_fraction, ContinuedFraction,
};
use sternbrocot::km_search::{km_search, smallest_denominator_in_interval};
use sternbrocot::real_approx::{approximate_unknown, best_approx_known};
use sternbrocot::sb_search::{rational_search_bounded, rational_search_unbounded};
use sternbrocot::{Fraction, RationalOracle, SBPath};

/// Reduced `a/b` with `1 ≤ a < b ≤ max`.
fn unit_fraction(max: u64) -> impl Strategy<Value = (u64, u64)> {
    (2..=max).prop_flat_map(|b| (1..b, Just(b))).prop_map(|(a, b)| {
        let g = gcd(a, b);
        (a / g, b / g)
    })
}

proptest! {
    #[test]
    fn path_round_trip_matches_tree_walk((a, b) in unit_fraction(5000)) {
        let f = frac(a, b);
        let path = fraction_to_sb_path(&f).unwrap();
        prop_assert_eq!(path.to_compact(), walk_path(a, b));
        prop_assert_eq!(sb_path_to_fraction(&path), f.clone());
        let cf = to_continued_fraction(&f).unwrap();
        let terms: Vec<u64> = cf.terms().iter().map(|t| u64::try_from(t).unwrap()).collect();
        prop_assert_eq!(terms, cf_terms(a, b));
        prop_assert_eq!(cf_to_sb_path(&cf).unwrap(), path.clone());
        prop_assert_eq!(path.to_string().parse::<SBPath>().unwrap(), path);
        prop_assert_eq!(cf.to_string().parse::<ContinuedFraction>().unwrap().evaluate(), f);
    }

    #[test]
    fn mediant_lies_strictly_between((a, b) in unit_fraction(1000), (c, d) in unit_fraction(1000)) {
        let (x, y) = (frac(a, b), frac(c, d));
        prop_assume!(x != y);
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        let m = mediant(&lo, &hi).unwrap();
        prop_assert!(lo < m && m < hi);
    }

    #[test]
    fn unbounded_search_is_exact_and_within_envelope(b in 2u64..1_000_000_000_000, a_seed in any::<u64>()) {
        let a = 1 + a_seed % (b - 1);
        let g = gcd(a, b);
        let (a, b) = (a / g, b / g);
        prop_assume!(b >= 2);
        let f = frac(a, b);
        let mut o = RationalOracle::new(f.clone());
        let (found, trace) = rational_search_unbounded(&mut o).unwrap();
        prop_assert_eq!(found, f);
        prop_assert_eq!(trace.total_queries, sternbrocot::ComparisonOracle::read_count(&o));
        prop_assert!((trace.total_queries as f64) <= 2.5849 * (b as f64).log2() + 2.0);
        check_trace(&trace).map_err(TestCaseError::fail)?;
        // Every run costs at most its budget.
        for s in &trace.segments {
            prop_assert!(s.queries <= budget(u64::try_from(&s.x).unwrap()));
        }
    }

    #[test]
    fn bounded_search_never_probes_past_the_bound((a, b) in unit_fraction(100_000), extra in 0u64..1000) {
        let n = BigUint::from(b + extra);
        let mut o = WatchedOracle::new(frac(a, b));
        let (found, trace) = rational_search_bounded(&mut o, &n).unwrap();
        prop_assert_eq!(found, frac(a, b));
        prop_assert!(o.max_probe_den <= n);
        check_trace(&trace).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn km_is_exact_within_grid_budget((a, b) in unit_fraction(100_000), extra in 0u64..1000) {
        let n = b + extra;
        let (found, q) = km_search(&mut RationalOracle::new(frac(a, b)), &BigUint::from(n)).unwrap();
        prop_assert_eq!(found, frac(a, b));
        let cells = 2 * u128::from(n) * u128::from(n);
        prop_assert!(q <= u64::from(128 - (cells - 1).leading_zeros()));
    }

    #[test]
    fn smallest_denominator_matches_scan(ln in 0u128..300, ld in 1u128..300, wn in 0u128..50, wd in 1u128..300) {
        // [ln/ld, ln/ld + wn/wd]
        let (hn, hd) = (ln * wd + wn * ld, ld * wd);
        let lo = Fraction::new(BigUint::from(ln), BigUint::from(ld)).unwrap();
        let hi = Fraction::new(BigUint::from(hn), BigUint::from(hd)).unwrap();
        let got = to_pair(&smallest_denominator_in_interval(&lo, &hi).unwrap());
        let (p, q) = brute_smallest_in(ln, ld, hn, hd);
        let g = num_integer::gcd(p, q);
        prop_assert_eq!(got, (p / g, q / g));
    }

    #[test]
    fn approximation_matches_scan(n in 1u128..5000, d in 1u128..500, k in 1u32..7) {
        let target = Fraction::new(BigUint::from(n), BigUint::from(d)).unwrap();
        let delta = Fraction::pow10_neg(k);
        let mut o = RationalOracle::new(target.clone());
        let got = approximate_unknown(&mut o, &delta).unwrap();
        let (tn, td) = to_pair(&target);
        prop_assert_eq!(to_pair(&got.fraction), brute_best_approx(tn, td, 1, 10u128.pow(k)));
        prop_assert_eq!(best_approx_known(&target, &target, &delta).unwrap(), got.fraction);
    }

    #[test]
    fn family_denominators_follow_run_recurrence(a in 1u64..12, b in 1u64..12, k in 1usize..8) {
        let f = worst_case_fraction(a, b, k);
        let xs: Vec<u64> = std::iter::repeat_n([a, b], k).flatten().collect();
        let (ca, cb) = run_coefficients(&xs);
        prop_assert_eq!(f.den(), &BigUint::from(ca + cb));
        let walked = walk_path(u64::try_from(f.num()).unwrap(), u64::try_from(f.den()).unwrap());
        let expected: String = xs.iter().enumerate()
            .map(|(i, &x)| (if i % 2 == 0 { "L" } else { "R" }).repeat(x as usize))
            .collect();
        prop_assert_eq!(walked, expected);
    }
}

#[test]
fn sampler_reproducible_across_calls() {
    let plan = TrialPlan { trials: 50, seed: 99 };
    let n = BigUint::from(10u32).pow(30);
    assert_eq!(plan.sample(&n), plan.sample(&n));
}

#[test]
fn growth_ratios_converge_to_closed_form() {
    for (a, b) in [(8u64, 1u64), (1, 1), (3, 2)] {
        let f = worst_case_fraction(a, b, 30);
        let mut o = RationalOracle::new(f);
        let (_, trace) = rational_search_unbounded(&mut o).unwrap();
        let ds: Vec<f64> = trace.segments.iter().map(|s| s.d.to_string().parse().unwrap()).collect();
        assert_eq!(ds.len(), 60);
        let (pa, pb) = growth_rates(a, b);
        // Run 59 is an a-run, run 60 a b-run (1-based).
        let ra = ds[58] / ds[57];
        let rb = ds[59] / ds[58];
        assert!((ra - pa.to_f64()).abs() < 1e-6, "({a},{b}) a: {ra} vs {pa}");
        assert!((rb - pb.to_f64()).abs() < 1e-6, "({a},{b}) b: {rb} vs {pb}");
    }
}

//! Property suites that need no published data.

mod common;

use proptest::prelude::*;
use stabmod_core::cohomology::CohomologyOptions;

fn matrix() -> impl Strategy<Value = (u64, Vec<Vec<i64>>)> {
    (prop::sample::select(vec![5u64, 7, 11, 13]), 1usize..9, 1usize..9).prop_flat_map(|(p, r, c)| {
        // Small entries make dependent rows common.
        let entry = prop_oneof![3 => Just(0i64), 2 => -2i64..3];
        (Just(p), prop::collection::vec(prop::collection::vec(entry, c), r))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rank_nullity_on_random_matrices((p, rows) in matrix()) {
        common::rank_nullity(p, &rows).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn d_squared_is_zero(index in 0usize..32, mask in any::<u64>(), p in prop::sample::select(vec![5u64, 7, 11])) {
        let algebras = common::catalog(p);
        let (_, a) = &algebras[index % algebras.len()];
        common::d_squared_vanishes(a, mask).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn sigma_is_a_chain_map(index in 0usize..32, mask in any::<u64>(), p in prop::sample::select(vec![5u64, 7, 11])) {
        let algebras = common::catalog(p);
        let (_, a) = &algebras[index % algebras.len()];
        common::sigma_commutes_with_d(a, mask).map_err(TestCaseError::fail)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generator_order_is_irrelevant(index in 0usize..32, rotate in 0usize..16) {
        let algebras = common::small_catalog(7, 12);
        let (_, a) = &algebras[index % algebras.len()];
        common::permutation_invariant(a, rotate).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn dense_threshold_is_irrelevant(index in 0usize..32, p in prop::sample::select(vec![5u64, 7, 11])) {
        let algebras = common::small_catalog(p, 12);
        let (_, a) = &algebras[index % algebras.len()];
        common::threshold_invariant(a).map_err(TestCaseError::fail)?;
    }
}

#[test]
fn euler_characteristic_and_palindromic_series_for_the_catalog() {
    let opts = CohomologyOptions::default();
    for (name, a) in common::catalog(7) {
        common::euler_and_palindrome(&a, &opts).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
    for p in [5, 11] {
        for (name, a) in common::small_catalog(p, 12) {
            common::euler_and_palindrome(&a, &opts).unwrap_or_else(|e| panic!("{name} at p={p}: {e}"));
        }
    }
}

#[test]
fn output_is_identical_for_every_jobs_value() {
    for args in [
        &["cohomology", "--family", "K", "--n", "3", "--m", "3", "--prime", "7", "--representatives"][..],
        &["ss", "--family", "E", "--n", "4", "--m", "4", "--level", "2", "--filtration", "ce"][..],
        &["conjecture", "--order", "10"][..],
    ] {
        common::jobs_deterministic(args).unwrap();
    }
}

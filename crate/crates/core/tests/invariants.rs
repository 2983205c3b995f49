use num_bigint::BigUint;
use proptest::prelude::*;

use symprog::count::{count_arrangement_restricted, count_product_hits, solve_restricted_patterns, FullCounter};
use symprog::feasible::is_feasible;
use symprog::oracle::{enumerate_full, enumerate_restricted, oracle_count, oracle_histogram};
use symprog::sample::{random_set_tuple, rng};
use symprog::{Budget, ProgressionKind, SpaceParams, SymmetricSet};

#[test]
fn every_restricted_progression_is_feasible() {
    let budget = Budget::default();
    for (q, n) in [(3, 4), (4, 3), (5, 2), (6, 2)] {
        let params = SpaceParams::new(q, n).unwrap();
        for prog in enumerate_restricted(&params, &budget).unwrap() {
            assert!(is_feasible(&prog.arrangement()), "{prog:?}");
        }
    }
}

#[test]
fn full_progressions_with_nonbinary_steps_can_be_infeasible() {
    // the restricted conditions do not constrain d outside {0,1}^n
    let params = SpaceParams::prime(5, 2).unwrap();
    let infeasible = enumerate_full(&params, &Budget::default())
        .unwrap()
        .filter(|p| !is_feasible(&p.arrangement()))
        .count();
    assert!(infeasible > 0);
}

#[test]
fn histogram_keys_are_exactly_the_nonzero_counts() {
    let params = SpaceParams::new(3, 5).unwrap();
    let hist = oracle_histogram(&params, ProgressionKind::Restricted, &Budget::default()).unwrap();
    let total: u64 = hist.histogram.values().sum();
    assert_eq!(BigUint::from(total), BigUint::from(6u32).pow(5));
    for (arr, &c) in &hist.histogram {
        assert_eq!(count_arrangement_restricted(arr), BigUint::from(c));
        assert!(!solve_restricted_patterns(arr).is_empty());
    }
}

#[test]
fn full_counts_for_p5() {
    let params = SpaceParams::prime(5, 2).unwrap();
    let hist = oracle_histogram(&params, ProgressionKind::Full, &Budget::default()).unwrap();
    let counter = FullCounter::new(5).unwrap();
    for (arr, &c) in &hist.histogram {
        assert_eq!(counter.count_arrangement(arr).unwrap(), BigUint::from(c));
    }
}

#[test]
fn empty_set_kills_every_count() {
    let params = SpaceParams::new(4, 3).unwrap();
    let sets = vec![SymmetricSet::full(params), SymmetricSet::full(params), SymmetricSet::empty(params), SymmetricSet::full(params)];
    let b = Budget::default();
    let kind = ProgressionKind::Restricted;
    assert_eq!(count_product_hits(&sets, kind, &b).unwrap(), BigUint::from(0u32));
    assert_eq!(oracle_count(&sets, kind, &b).unwrap().count, BigUint::from(0u32));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn restricted_product_matches_oracle(q in 3usize..=5, n in 1usize..=4, seed in any::<u64>()) {
        let params = SpaceParams::new(q, n).unwrap();
        let sets = random_set_tuple(params, 0.1, 1.0, &mut rng(seed)).unwrap();
        let b = Budget::default();
        prop_assert_eq!(
            count_product_hits(&sets, ProgressionKind::Restricted, &b).unwrap(),
            oracle_count(&sets, ProgressionKind::Restricted, &b).unwrap().count
        );
    }

    #[test]
    fn full_product_matches_oracle(p in prop::sample::select(vec![3usize, 5]), n in 1usize..=3, seed in any::<u64>()) {
        let params = SpaceParams::prime(p, n).unwrap();
        let sets = random_set_tuple(params, 0.1, 1.0, &mut rng(seed)).unwrap();
        let b = Budget::default();
        prop_assert_eq!(
            count_product_hits(&sets, ProgressionKind::Full, &b).unwrap(),
            oracle_count(&sets, ProgressionKind::Full, &b).unwrap().count
        );
    }
}

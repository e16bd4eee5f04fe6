use mints_core::{cost, subset_sum, verify_injective, verify_scheme, CostKind, Scheme, SubsetMask};
use proptest::prelude::*;

fn scheme_strategy(max_n: usize, max_entry: u64) -> impl Strategy<Value = Scheme> {
    prop::collection::vec((0..=max_entry, 0..=max_entry), 1..=max_n)
        .prop_filter("no zero column", |c| c.iter().all(|&(p, q)| p + q > 0))
        .prop_map(|c| {
            let columns: Vec<[u64; 2]> = c.into_iter().map(|(p, q)| [p, q]).collect();
            Scheme::from_columns(&columns).unwrap()
        })
}

fn feasible(s: &Scheme) -> bool {
    verify_scheme(s).unwrap().feasible
}

fn costs(s: &Scheme) -> Vec<u64> {
    CostKind::ALL.iter().map(|&k| cost(s, k)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn mint_permutation_invariance(
        (s, perm) in scheme_strategy(6, 8).prop_flat_map(|s| {
            let n = s.n_mints();
            (Just(s), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        })
    ) {
        let t = s.permute_mints(&perm).unwrap();
        prop_assert_eq!(feasible(&t), feasible(&s));
        prop_assert_eq!(costs(&t), costs(&s));
    }

    #[test]
    fn row_swap_invariance(s in scheme_strategy(6, 8)) {
        let t = s.swap_rows(0, 1);
        prop_assert_eq!(feasible(&t), feasible(&s));
        prop_assert_eq!(costs(&t), costs(&s));
    }

    #[test]
    fn row_scaling_invariance(s in scheme_strategy(6, 8), row in 0usize..2, factor in 1u64..=7) {
        let t = s.scale_row(row, factor).unwrap();
        prop_assert_eq!(feasible(&t), feasible(&s));
    }

    #[test]
    fn sub_scheme_monotonicity(s in scheme_strategy(6, 8)) {
        if feasible(&s) {
            for r in 0..s.n_mints() {
                if s.n_mints() > 1 {
                    prop_assert!(feasible(&s.without_mint(r).unwrap()));
                }
            }
        }
    }

    #[test]
    fn non_empty_subset_sums_are_nonzero(s in scheme_strategy(6, 8)) {
        for bits in 1..(1u64 << s.n_mints()) {
            prop_assert!(!subset_sum(&s, SubsetMask(bits)).unwrap().is_zero());
        }
        prop_assert!(subset_sum(&s, SubsetMask::EMPTY).unwrap().is_zero());
    }

    #[test]
    fn feasible_implies_injective(s in scheme_strategy(6, 8)) {
        if feasible(&s) {
            prop_assert!(verify_injective(&s).unwrap().feasible);
        }
    }

    #[test]
    fn witness_is_a_genuine_collision(s in scheme_strategy(6, 8)) {
        let report = verify_scheme(&s).unwrap();
        prop_assert_eq!(report.feasible, report.witness.is_none());
        if let Some((a, b)) = report.witness {
            prop_assert!(a.bits() < b.bits() && !a.is_empty());
            let (x, y) = (subset_sum(&s, a).unwrap(), subset_sum(&s, b).unwrap());
            prop_assert_eq!(x.coords()[0] * y.coords()[1], x.coords()[1] * y.coords()[0]);
        }
    }

    #[test]
    fn json_round_trip(s in scheme_strategy(6, 1_000_000)) {
        prop_assert_eq!(Scheme::from_json(&s.to_json()).unwrap(), s);
    }
}

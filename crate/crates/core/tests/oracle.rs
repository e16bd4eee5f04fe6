mod common;

use common::{all_schemes, random_scheme, rng, worked};
use mints_core::oracle::{exhaustive_min_cost, naive_verify};
use mints_core::{verify_scheme, CostKind, Scheme, SubsetMask};
use rand::Rng;

#[test]
fn naive_verify_examples() {
    assert!(naive_verify(&worked()).unwrap().feasible);
    let s = Scheme::from_columns(&[[1, 0], [0, 1], [1, 1]]).unwrap();
    let (a, b) = naive_verify(&s).unwrap().witness.unwrap();
    assert_eq!(
        (a, b),
        (
            SubsetMask::from_mints(&[1, 2]).unwrap(),
            SubsetMask::from_mints(&[3]).unwrap()
        )
    );
    assert!(
        naive_verify(&Scheme::from_columns(&[[1, 0]]).unwrap())
            .unwrap()
            .feasible
    );
}

#[test]
fn verifiers_agree_on_small_grid() {
    let mut checked = 0;
    for n in 1..=4 {
        for s in all_schemes(n, 3) {
            assert_eq!(verify_scheme(&s).unwrap(), naive_verify(&s).unwrap(), "{s}");
            checked += 1;
        }
    }
    assert_eq!(checked, 15 + 15 * 15 + 15usize.pow(3) + 15usize.pow(4));
}

#[test]
fn verifiers_agree_on_random_schemes() {
    let mut r = rng(5);
    for _ in 0..1000 {
        let n = r.gen_range(1..=6);
        let s = random_scheme(&mut r, 2, n, 8);
        assert_eq!(verify_scheme(&s).unwrap(), naive_verify(&s).unwrap(), "{s}");
    }
}

#[test]
fn exhaustive_examples() {
    assert_eq!(
        exhaustive_min_cost(2, CostKind::TotalMax, 4)
            .unwrap()
            .unwrap()
            .0,
        2
    );
    assert_eq!(
        exhaustive_min_cost(3, CostKind::TotalMax, 9)
            .unwrap()
            .unwrap()
            .0,
        4
    );
    assert!(exhaustive_min_cost(3, CostKind::TotalMax, 3)
        .unwrap()
        .is_none());
}

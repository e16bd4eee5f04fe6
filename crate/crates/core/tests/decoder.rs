mod common;

use common::{cols, feasible_fixtures, worked};
use mints_core::decoder::{decode_with_table, Observations};
use mints_core::{
    canonical_direction, decode, ratio_table, simulate_weighings, DecodeOutcome, IntVector,
    MintsError, Rational, SubsetMask,
};

fn r(s: &str) -> Rational {
    s.parse().unwrap()
}

const EPSILONS: [&str; 5] = ["-1/2", "1/3", "1", "7/5", "-2"];

#[test]
fn round_trip_on_fixtures() {
    let mut decoded = 0;
    for s in feasible_fixtures() {
        let table = ratio_table(&s).unwrap();
        for w in ["1", "5/2"] {
            for eps in EPSILONS {
                for bits in 0..(1u64 << s.n_mints()) {
                    let mask = SubsetMask(bits);
                    let obs = simulate_weighings(&s, r(w), r(eps), mask).unwrap();
                    let want = if mask.is_empty() {
                        DecodeOutcome::AllGenuine
                    } else {
                        DecodeOutcome::FakeSet(mask)
                    };
                    assert_eq!(
                        decode_with_table(&s, &table, r(w), &obs).unwrap(),
                        want,
                        "{s} {mask} eps {eps}"
                    );
                    decoded += 1;
                }
            }
        }
    }
    assert!(decoded > 1000);
}

#[test]
fn all_genuine_ignores_epsilon() {
    let obs = simulate_weighings(&worked(), r("2"), Rational::zero(), SubsetMask::EMPTY).unwrap();
    assert_eq!(obs, vec![r("6"), r("4")]);
}

#[test]
fn simulate_examples() {
    let s = worked();
    let fake3 = SubsetMask::from_mints(&[3]).unwrap();
    assert_eq!(
        simulate_weighings(&s, r("1"), r("1/2"), fake3).unwrap(),
        vec![r("4"), r("2")]
    );
    let fake12 = SubsetMask::from_mints(&[1, 2]).unwrap();
    assert_eq!(
        simulate_weighings(&s, r("1"), r("1/3"), fake12).unwrap(),
        vec![r("10/3"), r("8/3")]
    );
}

#[test]
fn simulate_rejects_bad_input() {
    let s = worked();
    let one = SubsetMask::from_mints(&[1]).unwrap();
    assert!(simulate_weighings(&s, r("0"), r("1"), one).is_err());
    assert!(simulate_weighings(&s, r("-1"), r("1"), one).is_err());
    assert!(simulate_weighings(&s, r("1"), Rational::zero(), one).is_err());
    assert!(simulate_weighings(&s, r("1"), r("1"), SubsetMask(0b1000)).is_err());
}

#[test]
fn decode_examples() {
    let s = worked();
    let fake = |m: &[usize]| DecodeOutcome::FakeSet(SubsetMask::from_mints(m).unwrap());
    assert_eq!(decode(&s, r("1"), &[r("4"), r("2")]).unwrap(), fake(&[3]));
    assert_eq!(
        decode(&s, r("1"), &[r("3"), r("2")]).unwrap(),
        DecodeOutcome::AllGenuine
    );
    assert_eq!(decode(&s, r("1"), &[r("4"), r("3")]).unwrap(), fake(&[2]));
    assert!(matches!(
        decode(&s, r("1"), &[r("4"), r("1")]).unwrap(),
        DecodeOutcome::Inconsistent(_)
    ));
    assert_eq!(
        decode(&s, r("1"), &[r("10/3"), r("8/3")]).unwrap(),
        fake(&[1, 2])
    );
}

#[test]
fn decode_needs_feasible_scheme() {
    let s = cols(&[[1, 0], [0, 1], [1, 1]]);
    assert!(matches!(
        decode(&s, r("1"), &[r("2"), r("2")]),
        Err(MintsError::InfeasibleScheme(..))
    ));
    assert!(matches!(
        ratio_table(&s),
        Err(MintsError::InfeasibleScheme(..))
    ));
}

#[test]
fn ratio_table_examples() {
    assert_eq!(ratio_table(&worked()).unwrap().len(), 7);
    let t = ratio_table(&cols(&[[1, 0]])).unwrap();
    let dir = |a, b| canonical_direction(&IntVector(vec![a, b])).unwrap();
    assert_eq!(t.len(), 1);
    assert_eq!(t.get(&dir(1, 0)), Some(SubsetMask(1)));
    let t = ratio_table(&cols(&[[1, 0], [0, 1]])).unwrap();
    assert_eq!(t.get(&dir(1, 0)), Some(SubsetMask(0b01)));
    assert_eq!(t.get(&dir(0, 1)), Some(SubsetMask(0b10)));
    assert_eq!(t.get(&dir(1, 1)), Some(SubsetMask(0b11)));
}

#[test]
fn decoding_is_sound_across_masks() {
    for s in feasible_fixtures() {
        let table = ratio_table(&s).unwrap();
        let n = s.n_mints();
        for a in 1..(1u64 << n) {
            for eps in EPSILONS {
                let obs = simulate_weighings(&s, r("1"), r(eps), SubsetMask(a)).unwrap();
                for b in 1..(1u64 << n) {
                    if a != b {
                        assert_ne!(
                            decode_with_table(&s, &table, r("1"), &obs).unwrap(),
                            DecodeOutcome::FakeSet(SubsetMask(b))
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn observations_json() {
    let obs: Observations = serde_json::from_str(r#"{"weighings": ["3", "-1/3"]}"#).unwrap();
    assert_eq!(obs.weighings, vec![r("3"), r("-1/3")]);
    assert_eq!(
        serde_json::to_string(&obs).unwrap(),
        r#"{"weighings":["3","-1/3"]}"#
    );
    assert!(serde_json::from_str::<Observations>(r#"{"weighings": ["1/0"]}"#).is_err());
}

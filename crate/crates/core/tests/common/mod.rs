#![allow(dead_code)]

use mints_core::{verify_scheme, Scheme};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn worked() -> Scheme {
    Scheme::two_weighings(vec![0, 1, 2], vec![1, 1, 0]).unwrap()
}

pub fn cols(c: &[[u64; 2]]) -> Scheme {
    Scheme::from_columns(c).unwrap()
}

/// A random valid scheme with `rows` weighings, `n` mints and entries at most `max_entry`.
pub fn random_scheme(rng: &mut impl Rng, rows: usize, n: usize, max_entry: u64) -> Scheme {
    let columns: Vec<Vec<u64>> = (0..n)
        .map(|_| loop {
            let c: Vec<u64> = (0..rows).map(|_| rng.gen_range(0..=max_entry)).collect();
            if c.iter().any(|&x| x > 0) {
                break c;
            }
        })
        .collect();
    Scheme::from_columns(&columns).unwrap()
}

/// A random feasible two-weighing scheme, built by rejection one column at a time.
pub fn random_feasible(rng: &mut impl Rng, n: usize, max_entry: u64) -> Scheme {
    'outer: loop {
        let mut columns: Vec<Vec<u64>> = Vec::new();
        while columns.len() < n {
            let mut ok = false;
            for _ in 0..200 {
                let c = vec![rng.gen_range(0..=max_entry), rng.gen_range(0..=max_entry)];
                if c == [0, 0] {
                    continue;
                }
                columns.push(c);
                if verify_scheme(&Scheme::from_columns(&columns).unwrap())
                    .unwrap()
                    .feasible
                {
                    ok = true;
                    break;
                }
                columns.pop();
            }
            if !ok {
                continue 'outer;
            }
        }
        return Scheme::from_columns(&columns).unwrap();
    }
}

/// Every two-weighing scheme with `n` mints and entries at most `max_entry`.
pub fn all_schemes(n: usize, max_entry: u64) -> Vec<Scheme> {
    let side = max_entry + 1;
    let vectors: Vec<Vec<u64>> = (1..side * side).map(|i| vec![i / side, i % side]).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let columns: Vec<Vec<u64>> = idx.iter().map(|&i| vectors[i].clone()).collect();
        out.push(Scheme::from_columns(&columns).unwrap());
        let mut j = 0;
        loop {
            if j == n {
                return out;
            }
            idx[j] += 1;
            if idx[j] < vectors.len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// Feasible schemes with up to five mints used as decoder fixtures.
pub fn feasible_fixtures() -> Vec<Scheme> {
    let mut out = vec![
        cols(&[[1, 0]]),
        cols(&[[0, 3]]),
        cols(&[[1, 0], [0, 1]]),
        worked(),
        cols(&[[1, 0], [1, 1], [0, 2]]),
        cols(&[[1, 1], [2, 1], [6, 1]]),
        cols(&[[1, 0], [2, 1], [2, 2], [0, 3]]),
        cols(&[[1, 0], [1, 1], [0, 2], [4, 1]]),
        cols(&[[1, 1], [2, 1], [6, 1], [24, 1]]),
        cols(&[[1, 1], [2, 0], [2, 1], [0, 5], [5, 4]]),
        cols(&[[2, 0], [0, 3], [1, 4], [4, 2], [4, 4]]),
        cols(&[[1, 1], [2, 1], [6, 1], [24, 1], [120, 1]]),
    ];
    let mut r = rng(0xF1C5);
    for n in 1..=5 {
        for _ in 0..4 {
            out.push(random_feasible(&mut r, n, 12));
        }
    }
    for s in &out {
        assert!(
            verify_scheme(s).unwrap().feasible,
            "fixture {s} must be feasible"
        );
    }
    out
}

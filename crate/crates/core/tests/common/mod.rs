#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use voronoi_core::exact::{canonical_sign, IntMatrix, Rational, SymMatrix};

pub const SEED: u64 = 0x5eed_2024;

pub fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(SEED), failure_persistence: None, ..Config::default() }
}

/// Product of elementary column operations `col_j += s * col_i` followed by
/// a cyclic shift, all from `ops`.
pub fn unimodular(n: usize, ops: &[(usize, usize, bool)], shift: usize) -> IntMatrix {
    let mut m = vec![vec![0i64; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[(i + shift) % n] = 1;
    }
    for &(i, j, neg) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        let s = if neg { -1 } else { 1 };
        for row in m.iter_mut() {
            row[j] += s * row[i];
        }
    }
    let rows: Vec<&[i64]> = m.iter().map(Vec::as_slice).collect();
    IntMatrix::from_i64(&rows)
}

pub fn unimodular_strategy(n: usize) -> impl Strategy<Value = IntMatrix> {
    (proptest::collection::vec((0..n, 0..n, any::<bool>()), 0..6), 0..n)
        .prop_map(move |(ops, shift)| unimodular(n, &ops, shift))
}

/// `(B^t B + D) / den` with small integer `B`, positive diagonal `D`.
pub fn pd_strategy(n: usize) -> impl Strategy<Value = SymMatrix> {
    (proptest::collection::vec(-3i64..=3, n * n), proptest::collection::vec(1i64..=3, n), 1i64..=4).prop_map(
        move |(b, d, den)| {
            SymMatrix::from_upper(n, |i, j| {
                let mut s: i64 = (0..n).map(|k| b[k * n + i] * b[k * n + j]).sum();
                if i == j {
                    s += d[i];
                }
                Rational::new(s.into(), den.into())
            })
        },
    )
}

pub fn apply_canonical(u: &IntMatrix, v: &[i64]) -> Vec<i64> {
    canonical_sign(u.apply(v))
}

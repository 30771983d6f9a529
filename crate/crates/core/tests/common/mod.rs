//! Ring builders shared by the integration tests.
#![allow(dead_code)]

use fusion_classes::fusion::FusionRing;
use fusion_classes::scalar::Rational;

pub type Tensor = Vec<Vec<Vec<i64>>>;

pub fn unit_law(r: usize, rest: impl Fn(usize, usize, usize) -> i64) -> Tensor {
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    (0..r)
                        .map(|k| match (i, j) {
                            (0, _) => (j == k) as i64,
                            (_, 0) => (i == k) as i64,
                            _ => rest(i, j, k),
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// (labels, dual, N) for the building blocks.
pub fn block(which: usize) -> (Vec<String>, Vec<usize>, Tensor) {
    let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    match which {
        0..=2 => {
            let n = which + 2;
            let labels = (0..n).map(|i| format!("g{i}")).collect();
            let t = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..n).map(|k| ((i + j) % n == k) as i64).collect())
                        .collect()
                })
                .collect();
            (labels, (0..n).map(|i| (n - i) % n).collect(), t)
        }
        3 => (names(&["1", "tau"]), vec![0, 1], unit_law(2, |_, _, _| 1)),
        4 => (
            names(&["1", "eps", "sigma"]),
            vec![0, 1, 2],
            unit_law(3, |i, j, k| {
                matches!((i, j, k), (1, 1, 0) | (1, 2, 2) | (2, 1, 2) | (2, 2, 0) | (2, 2, 1)) as i64
            }),
        ),
        _ => (
            names(&["1", "sgn", "V"]),
            vec![0, 1, 2],
            unit_law(3, |i, j, k| {
                matches!(
                    (i, j, k),
                    (1, 1, 0) | (1, 2, 2) | (2, 1, 2) | (2, 2, 0) | (2, 2, 1) | (2, 2, 2)
                ) as i64
            }),
        ),
    }
}

pub fn ring(labels: Vec<String>, dual: Vec<usize>, t: &Tensor) -> FusionRing {
    let t = t
        .iter()
        .map(|m| {
            m.iter()
                .map(|row| row.iter().map(|&v| Rational::from_integer(v)).collect())
                .collect()
        })
        .collect();
    FusionRing::new(labels, 0, dual, t).unwrap()
}

/// `A (x) B` with basis pairs `(a, b)` at index `a * |B| + b`.
pub fn product(x: usize, y: usize) -> FusionRing {
    let (la, da, ta) = block(x);
    let (lb, db, tb) = block(y);
    let (ra, rb) = (la.len(), lb.len());
    let r = ra * rb;
    let mut labels = Vec::with_capacity(r);
    let mut dual = Vec::with_capacity(r);
    for a in 0..ra {
        for b in 0..rb {
            labels.push(format!("{}.{}", la[a], lb[b]));
            dual.push(da[a] * rb + db[b]);
        }
    }
    let t: Tensor = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    (0..r)
                        .map(|k| ta[i / rb][j / rb][k / rb] * tb[i % rb][j % rb][k % rb])
                        .collect()
                })
                .collect()
        })
        .collect();
    ring(labels, dual, &t)
}

pub fn single(x: usize) -> FusionRing {
    let (l, d, t) = block(x);
    ring(l, d, &t)
}

pub const FIB: usize = 3;
pub const ISING: usize = 4;
pub const S3REP: usize = 5;
/// Number of building blocks accepted by [`block`].
pub const BLOCKS: usize = 6;

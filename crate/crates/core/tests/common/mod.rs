// SPDX-License-Identifier: MIT OR Apache-2.0
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// 1-based ranks, ties broken by position. Written independently of the crate.
pub fn ranks(x: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].partial_cmp(&x[b]).unwrap().then(a.cmp(&b)));
    let mut r = vec![0; x.len()];
    for (pos, &i) in idx.iter().enumerate() {
        r[i] = pos + 1;
    }
    r
}

fn entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        p * p.ln() + (1.0 - p) * (1.0 - p).ln()
    }
}

/// Segment log-likelihood of `[i, j)` by summing over every order statistic.
pub fn direct_cost(x: &[f64], i: usize, j: usize, zhang: bool, correction: bool) -> f64 {
    let n = x.len();
    let r = ranks(x);
    let m = j - i;
    let seg = &r[i - 1..j - 1];
    let mut total = 0.0;
    for l in 1..n {
        let w = if zhang {
            if l == 1 {
                continue;
            }
            n as f64 / (l as f64 * (n - l) as f64)
        } else {
            1.0 / n as f64
        };
        let c = seg.iter().filter(|&&q| q <= l).count();
        let p = if c == 0 {
            0.0
        } else if correction {
            c as f64 / m as f64 - 0.5 / m as f64
        } else {
            c as f64 / m as f64
        };
        total += w * entropy(p);
    }
    m as f64 * total
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(1e-12)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Normal-ish noise with a few level shifts; `ties` rounds to create repeats.
pub fn random_series(rng: &mut ChaCha8Rng, n: usize, ties: bool) -> Vec<f64> {
    let mut level = 0.0f64;
    (0..n)
        .map(|_| {
            if rng.random::<f64>() < 0.1 {
                level += rng.random_range(-3.0..3.0);
            }
            let v: f64 = level + rng.random_range(-1.0..1.0) + rng.random_range(-1.0..1.0);
            if ties {
                v.round()
            } else {
                v
            }
        })
        .collect()
}

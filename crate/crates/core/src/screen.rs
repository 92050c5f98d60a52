// SPDX-License-Identifier: MIT OR Apache-2.0

//! Candidate screening with a sliding two-sample Cramér–von Mises scan.
//!
//! For every split `i` in `[w, n - w]` the `w` observations ending at `i` are
//! compared with the `w` observations starting at `i + 1`. A split becomes a
//! candidate when its score is the (first) maximum over `(i - w, i + w]`.

use alloc::format;
use alloc::vec::Vec;

use crate::empirical::Sample;
use crate::error::{NmcdError, Result};

/// Two-sample Cramér–von Mises statistic
/// `n1 n2 / N^2 * sum over pooled points of (F1 - F2)^2`.
///
/// ECDFs are evaluated at pooled values, so tied values are counted together.
pub fn cvm_two_sample(left: &[f64], right: &[f64]) -> Result<f64> {
    if left.is_empty() || right.is_empty() {
        return Err(NmcdError::input("Cramér–von Mises needs two nonempty samples"));
    }
    let mut a = left.to_vec();
    let mut b = right.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    Ok(cvm_sorted(&a, &b))
}

fn cvm_sorted(a: &[f64], b: &[f64]) -> f64 {
    let (n1, n2) = (a.len(), b.len());
    let (n1f, n2f) = (n1 as f64, n2 as f64);
    let (mut i, mut j) = (0, 0);
    let mut sum = 0.0;
    while i < n1 || j < n2 {
        let u = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => unreachable!(),
        };
        let (i0, j0) = (i, j);
        while i < n1 && a[i] <= u {
            i += 1;
        }
        while j < n2 && b[j] <= u {
            j += 1;
        }
        let d = i as f64 / n1f - j as f64 / n2f;
        sum += ((i - i0) + (j - j0)) as f64 * d * d;
    }
    let total = n1f + n2f;
    n1f * n2f / (total * total) * sum
}

/// `ceil((ln n)^{3/2} / 2)`.
pub fn default_window(n: usize) -> usize {
    let ln = libm::log(n as f64);
    libm::ceil(libm::pow(ln, 1.5) / 2.0) as usize
}

/// Screening output.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    window: usize,
    gamma: Vec<f64>,
    splits: Vec<usize>,
}

impl CandidateSet {
    /// Half-width of the scan window.
    pub fn window(&self) -> usize {
        self.window
    }

    /// Score of split `i` (1-based), zero outside the scannable range.
    pub fn gamma(&self, i: usize) -> f64 {
        self.gamma[i - 1]
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gamma
    }

    /// Selected splits `i`, meaning a break between `i` and `i + 1`.
    pub fn splits(&self) -> &[usize] {
        &self.splits
    }

    /// Selected splits as change-point positions (`i + 1`, first index of the
    /// new segment), ready to be used as DP grid boundaries.
    pub fn change_points(&self) -> Vec<usize> {
        self.splits.iter().map(|&i| i + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.splits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.splits.is_empty()
    }
}

pub fn scan(sample: &Sample, window: usize) -> Result<CandidateSet> {
    let n = sample.len();
    if window < 2 || 2 * window > n {
        return Err(NmcdError::input(format!(
            "window {window} infeasible for n = {n} (need 2 <= window <= n / 2)"
        )));
    }
    let x = sample.values();
    let mut gamma = alloc::vec![0.0; n];
    let mut left = Vec::with_capacity(window);
    let mut right = Vec::with_capacity(window);
    for i in window..=n - window {
        left.clear();
        left.extend_from_slice(&x[i - window..i]);
        right.clear();
        right.extend_from_slice(&x[i..i + window]);
        left.sort_by(f64::total_cmp);
        right.sort_by(f64::total_cmp);
        gamma[i - 1] = cvm_sorted(&left, &right);
    }

    let splits = (window..=n - window)
        .filter(|&i| {
            let lo = i + 1 - window;
            let hi = i + window;
            let mut arg = lo;
            for j in lo + 1..=hi {
                if gamma[j - 1] > gamma[arg - 1] {
                    arg = j;
                }
            }
            arg == i
        })
        .collect();

    Ok(CandidateSet {
        window,
        gamma,
        splits,
    })
}

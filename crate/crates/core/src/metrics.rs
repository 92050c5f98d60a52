// SPDX-License-Identifier: MIT OR Apache-2.0

//! Distances between change-point sets and the Rand index.
//!
//! `xi(a, b) = max_{y in b} min_{x in a} |x - y|`: how far the worst point of
//! `b` is from its nearest point of `a`. With `G` the estimate and `C` the
//! truth, `xi(G, C)` is large when a true change is missed and `xi(C, G)` is
//! large when a spurious change is reported. The literature calls `xi(G, C)`
//! the over-segmentation error and `xi(C, G)` the under-segmentation error even
//! though the roles read the other way round; the aliases below follow that
//! naming while `xi` itself is named by its formula.

use alloc::format;

use crate::dp::Segmentation;
use crate::error::{NmcdError, Result};

pub fn xi(from: &[usize], to: &[usize]) -> Result<usize> {
    if from.is_empty() || to.is_empty() {
        return Err(NmcdError::input("distance between change-point sets needs two nonempty sets"));
    }
    Ok(to
        .iter()
        .map(|&b| from.iter().map(|&a| a.abs_diff(b)).min().unwrap())
        .max()
        .unwrap())
}

/// `xi(a, b) + xi(b, a)`.
pub fn xi_sum(a: &[usize], b: &[usize]) -> Result<usize> {
    Ok(xi(a, b)? + xi(b, a)?)
}

/// `xi(estimate, truth)`.
pub fn over_segmentation_error(estimate: &[usize], truth: &[usize]) -> Result<usize> {
    xi(estimate, truth)
}

/// `xi(truth, estimate)`.
pub fn under_segmentation_error(estimate: &[usize], truth: &[usize]) -> Result<usize> {
    xi(truth, estimate)
}

fn pairs(k: usize) -> f64 {
    let k = k as f64;
    k * (k - 1.0) / 2.0
}

/// Fraction of index pairs that both segmentations treat alike
/// (same segment in both, or different segments in both).
pub fn rand_index(a: &Segmentation, b: &Segmentation) -> Result<f64> {
    let n = a.n();
    if n != b.n() {
        return Err(NmcdError::input(format!(
            "segmentations cover different lengths ({n} vs {})",
            b.n()
        )));
    }
    if n < 2 {
        return Ok(1.0);
    }
    let within_a: f64 = a.segments().map(|(s, e)| pairs(e - s)).sum();
    let within_b: f64 = b.segments().map(|(s, e)| pairs(e - s)).sum();

    // overlaps of contiguous segments: walk both lists together
    let mut within_both = 0.0;
    let mut sa = a.segments().peekable();
    let mut sb = b.segments().peekable();
    while let (Some(&(s1, e1)), Some(&(s2, e2))) = (sa.peek(), sb.peek()) {
        let lo = s1.max(s2);
        let hi = e1.min(e2);
        if hi > lo {
            within_both += pairs(hi - lo);
        }
        if e1 <= e2 {
            sa.next();
        } else {
            sb.next();
        }
    }
    let total = pairs(n);
    Ok((total + 2.0 * within_both - within_a - within_b) / total)
}

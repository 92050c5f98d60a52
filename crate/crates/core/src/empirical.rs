// SPDX-License-Identifier: MIT OR Apache-2.0

//! Ranks, order statistics and the per-order-statistic weight tables.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{NmcdError, Result};

/// An immutable univariate sample with its pooled ranks precomputed.
///
/// Ranks are 1-based. Ties are broken by original position, so the rank
/// vector is always a permutation of `1..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
    ranks: Vec<usize>,
    sorted_values: Vec<f64>,
}

impl Sample {
    pub fn new(values: &[f64]) -> Result<Self> {
        if values.len() < 2 {
            return Err(NmcdError::input(format!(
                "need at least 2 observations, got {}",
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(NmcdError::input(format!(
                "non-finite value at index {}",
                pos + 1
            )));
        }
        let mut order: Vec<usize> = (0..values.len()).collect();
        // stable sort: equal values (0.0 and -0.0 included) keep index order
        order.sort_by(|&a, &b| {
            values[a]
                .partial_cmp(&values[b])
                .unwrap_or(core::cmp::Ordering::Equal)
        });
        let mut ranks = alloc::vec![0usize; values.len()];
        for (r, &p) in order.iter().enumerate() {
            ranks[p] = r + 1;
        }
        let sorted_values = order.iter().map(|&p| values[p]).collect();
        Ok(Self {
            values: values.to_vec(),
            ranks,
            sorted_values,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Rank of every observation, in observation order (0-based slice, 1-based ranks).
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn sorted_values(&self) -> &[f64] {
        &self.sorted_values
    }

    /// The `l`-th order statistic, `1 <= l <= n`.
    pub fn order_statistic(&self, l: usize) -> f64 {
        self.sorted_values[l - 1]
    }

    pub(crate) fn check_segment(&self, i: usize, j: usize) -> Result<()> {
        let n = self.len();
        if i < 1 || i >= j || j > n + 1 {
            return Err(NmcdError::index(format!(
                "segment [{i}, {j}) invalid for n = {n}"
            )));
        }
        Ok(())
    }

    /// Sorted ranks of the observations with index in `[i, j)`.
    pub fn segment_rank_multiset(&self, i: usize, j: usize) -> Result<Vec<usize>> {
        self.check_segment(i, j)?;
        let mut out = self.ranks[i - 1..j - 1].to_vec();
        out.sort_unstable();
        Ok(out)
    }
}

/// Weight placed on each pooled order statistic when integrating segment
/// log-likelihoods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightVariant {
    /// `dw = dF / (F (1 - F))`, which up-weights the tails.
    #[default]
    Zhang,
    /// `dw = dF`.
    Uniform,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightTable {
    variant: WeightVariant,
    point_weights: Vec<f64>,
    // prefix[l] = sum of point_weights[1..=l]; prefix[0] = 0
    prefix: Vec<f64>,
}

impl WeightTable {
    pub fn new(n: usize, variant: WeightVariant) -> Result<Self> {
        if n < 2 {
            return Err(NmcdError::input(format!("weight table needs n >= 2, got {n}")));
        }
        let nf = n as f64;
        let point_weights: Vec<f64> = (1..=n)
            .map(|l| match variant {
                WeightVariant::Zhang if l >= 2 && l < n => {
                    let lf = l as f64;
                    nf / (lf * (nf - lf))
                }
                WeightVariant::Zhang => 0.0,
                WeightVariant::Uniform if l < n => 1.0 / nf,
                WeightVariant::Uniform => 0.0,
            })
            .collect();
        let mut prefix = Vec::with_capacity(n + 1);
        prefix.push(0.0);
        let mut acc = 0.0;
        for w in &point_weights {
            acc += w;
            prefix.push(acc);
        }
        Ok(Self {
            variant,
            point_weights,
            prefix,
        })
    }

    pub fn variant(&self) -> WeightVariant {
        self.variant
    }

    pub fn n(&self) -> usize {
        self.point_weights.len()
    }

    /// Weight of the `l`-th order statistic, `1 <= l <= n`.
    pub fn weight(&self, l: usize) -> f64 {
        self.point_weights[l - 1]
    }

    pub fn point_weights(&self) -> &[f64] {
        &self.point_weights
    }

    /// Cumulative weight of order statistics `1..=l`; `prefix(0) == 0`.
    pub fn prefix(&self, l: usize) -> f64 {
        self.prefix[l]
    }

    pub fn total(&self) -> f64 {
        self.prefix[self.n()]
    }
}

// SPDX-License-Identifier: MIT OR Apache-2.0

//! Parametric least-squares competitors.
//!
//! `Mean` minimizes the within-segment sum of squares; `MeanVar` minimizes
//! `sum_k m_k ln(sigma_k^2)` so that scale changes are visible too. Both are
//! negated into the maximizing DP shared with the nonparametric detector.
//!
//! Segment statistics are accumulated left to right with Welford's update, so
//! a segment cost and the grid sweep in [`SegmentCost::pair_costs`] perform the
//! same floating-point operations and agree exactly.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{NmcdError, Result};
use crate::pipeline::{self, DetectionResult, Selection};
use crate::segcost::{validate_grid, PairCosts, SegmentCost};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlCriterion {
    Mean,
    MeanVar,
}

#[derive(Debug, Clone, Copy, Default)]
struct Welford {
    count: usize,
    mean: f64,
    m2: f64,
}

impl Welford {
    #[inline]
    fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }
}

fn sse(values: &[f64]) -> f64 {
    let mut w = Welford::default();
    values.iter().for_each(|&x| w.push(x));
    w.m2
}

fn var_cost_from(w: &Welford) -> f64 {
    if w.count < 2 || w.m2 <= 0.0 {
        return f64::INFINITY;
    }
    let m = w.count as f64;
    m * libm::log(w.m2 / m)
}

fn segment(values: &[f64], i: usize, j: usize) -> Result<&[f64]> {
    let n = values.len();
    if i < 1 || i >= j || j > n + 1 {
        return Err(NmcdError::index(format!(
            "segment [{i}, {j}) invalid for n = {n}"
        )));
    }
    Ok(&values[i - 1..j - 1])
}

/// Within-segment sum of squared deviations from the segment mean.
pub fn ls_mean_cost(values: &[f64], i: usize, j: usize) -> Result<f64> {
    Ok(sse(segment(values, i, j)?))
}

/// `m ln(sigma^2)` with `sigma^2` the segment mean squared deviation;
/// `+inf` when the segment has fewer than two points or zero variance.
pub fn ls_var_cost(values: &[f64], i: usize, j: usize) -> Result<f64> {
    let seg = segment(values, i, j)?;
    let mut w = Welford::default();
    seg.iter().for_each(|&x| w.push(x));
    Ok(var_cost_from(&w))
}

/// Least-squares objective in maximizing form.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    values: Vec<f64>,
    criterion: PlCriterion,
}

impl LeastSquares {
    pub fn new(values: &[f64], criterion: PlCriterion) -> Result<Self> {
        if values.len() < 2 {
            return Err(NmcdError::input("need at least 2 observations"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(NmcdError::input("non-finite observation"));
        }
        Ok(Self {
            values: values.to_vec(),
            criterion,
        })
    }

    fn score(&self, w: &Welford) -> f64 {
        match self.criterion {
            PlCriterion::Mean => -w.m2,
            PlCriterion::MeanVar => -var_cost_from(w),
        }
    }
}

impl SegmentCost for LeastSquares {
    fn n(&self) -> usize {
        self.values.len()
    }

    fn segment_cost(&self, i: usize, j: usize) -> Result<f64> {
        let seg = segment(&self.values, i, j)?;
        let mut w = Welford::default();
        seg.iter().for_each(|&x| w.push(x));
        Ok(self.score(&w))
    }

    fn pair_costs(&self, boundaries: &[usize]) -> Result<PairCosts> {
        validate_grid(boundaries, self.n())?;
        let g = boundaries.len();
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(g);
        for a in 0..g - 1 {
            let mut w = Welford::default();
            let mut row = alloc::vec![f64::NAN; g];
            let mut next = a + 1;
            for p in boundaries[a]..boundaries[g - 1] {
                w.push(self.values[p - 1]);
                if p + 1 == boundaries[next] {
                    row[next] = self.score(&w);
                    next += 1;
                }
            }
            rows.push(row);
        }
        PairCosts::from_fn(boundaries, self.n(), |i, j| {
            let a = boundaries.binary_search(&i).unwrap();
            let b = boundaries.binary_search(&j).unwrap();
            rows[a][b]
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlConfig {
    pub known_k: Option<usize>,
    pub k_bar: usize,
    /// Penalty per change-point; `ln n` when unset.
    pub zeta: Option<f64>,
    pub allow_zero: bool,
}

impl Default for PlConfig {
    fn default() -> Self {
        Self {
            known_k: None,
            k_bar: 30,
            zeta: None,
            allow_zero: false,
        }
    }
}

/// Least-squares detection over the full grid with BIC penalty `L * zeta`.
pub fn pl_detect(
    values: &[f64],
    criterion: PlCriterion,
    config: &PlConfig,
) -> Result<DetectionResult> {
    let n = values.len();
    if n < 3 {
        return Err(NmcdError::input(format!("need at least 3 observations, got {n}")));
    }
    if config.known_k == Some(0) {
        return Err(NmcdError::input("known K must be at least 1"));
    }
    let ls = LeastSquares::new(values, criterion)?;
    let grid = pipeline::full_grid(n);
    let costs = ls.pair_costs(&grid)?;
    let mut warnings = Vec::new();
    let mut res = pipeline::optimize(
        &costs,
        Selection {
            known_k: config.known_k,
            k_bar: config.k_bar,
            l_min: usize::from(!config.allow_zero),
            zeta: config.zeta.unwrap_or_else(|| libm::log(n as f64)),
        },
        &mut warnings,
    )?;
    res.warnings = warnings;
    Ok(res)
}

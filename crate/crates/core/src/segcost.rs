// SPDX-License-Identifier: MIT OR Apache-2.0

//! Segment log-likelihood of the rank-based nonparametric model.
//!
//! For a segment `[i, j)` of length `m`, let `c_l` be the number of its
//! observations whose pooled rank is at most `l`. The segment contributes
//!
//! ```text
//! m * sum_l w_l * H(c_l / m - 1 / (2m))
//! ```
//!
//! where `H(x) = x ln x + (1 - x) ln(1 - x)` and `w_l` comes from the
//! [`WeightTable`]. The `1/(2m)` shift is the continuity correction; it is
//! applied only when `c_l >= 1` (for `c_l = 0` the term is the limit value 0).
//!
//! `c_l` is constant between consecutive ranks of the segment, so the sum is
//! evaluated over rank gaps with prefix sums of the weights, in ascending rank
//! order. [`CostModel::segment_cost`] and [`SegmentCost::pair_costs`] share
//! that evaluation and therefore agree bit for bit.

use alloc::format;
use alloc::vec::Vec;

use crate::empirical::{Sample, WeightTable, WeightVariant};
use crate::error::{NmcdError, Result};

/// `x ln x + (1 - x) ln(1 - x)` with the limit value 0 at both ends.
pub fn bernoulli_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(NmcdError::Domain(format!("entropy argument {x} not in [0, 1]")));
    }
    let mut h = 0.0;
    if x > 0.0 {
        h += x * libm::log(x);
    }
    if x < 1.0 {
        h += (1.0 - x) * libm::log(1.0 - x);
    }
    Ok(h)
}

/// Segment ECDF value `count / m`, shifted by `-1/(2m)` when `correction`
/// is on and `count >= 1`. Always lies in `[0, 1)` when corrected.
pub fn corrected_fraction(count: usize, m: usize, correction: bool) -> f64 {
    debug_assert!(m >= 1 && count <= m);
    let mf = m as f64;
    let frac = count as f64 / mf;
    if correction && count >= 1 {
        frac - 1.0 / (2.0 * mf)
    } else {
        frac
    }
}

/// A segment-additive objective to be maximized by the dynamic program.
pub trait SegmentCost {
    /// Number of observations.
    fn n(&self) -> usize;

    /// Contribution of the segment `[i, j)`; `-inf` marks an infeasible segment.
    fn segment_cost(&self, i: usize, j: usize) -> Result<f64>;

    /// Costs of every segment whose endpoints are both on `boundaries`.
    fn pair_costs(&self, boundaries: &[usize]) -> Result<PairCosts> {
        let mut table = PairCosts::empty(boundaries, self.n())?;
        let g = table.boundaries.len();
        for a in 0..g - 1 {
            for b in a + 1..g {
                let c = self.segment_cost(table.boundaries[a], table.boundaries[b])?;
                table.set(a, b, c);
            }
        }
        Ok(table)
    }
}

/// Dense table of segment costs over a boundary grid.
///
/// Positions are indices into `boundaries`; only `a < b` entries are meaningful.
#[derive(Debug, Clone, PartialEq)]
pub struct PairCosts {
    boundaries: Vec<usize>,
    values: Vec<f64>,
}

impl PairCosts {
    /// Validates the grid: strictly increasing, starts at 1, ends at `n + 1`.
    pub fn empty(boundaries: &[usize], n: usize) -> Result<Self> {
        validate_grid(boundaries, n)?;
        let g = boundaries.len();
        Ok(Self {
            boundaries: boundaries.to_vec(),
            values: alloc::vec![f64::NAN; g * g],
        })
    }

    pub fn from_fn(
        boundaries: &[usize],
        n: usize,
        mut cost: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        let mut t = Self::empty(boundaries, n)?;
        let g = boundaries.len();
        for a in 0..g - 1 {
            for b in a + 1..g {
                t.set(a, b, cost(boundaries[a], boundaries[b]));
            }
        }
        Ok(t)
    }

    pub fn boundaries(&self) -> &[usize] {
        &self.boundaries
    }

    pub fn n(&self) -> usize {
        *self.boundaries.last().expect("grid is nonempty") - 1
    }

    pub fn grid_len(&self) -> usize {
        self.boundaries.len()
    }

    /// Cost between grid positions `a < b`.
    #[inline]
    pub fn at(&self, a: usize, b: usize) -> f64 {
        self.values[a * self.boundaries.len() + b]
    }

    fn set(&mut self, a: usize, b: usize, v: f64) {
        let g = self.boundaries.len();
        self.values[a * g + b] = v;
    }

    /// Cost of segment `[i, j)` when both ends lie on the grid.
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        let a = self.boundaries.binary_search(&i).ok()?;
        let b = self.boundaries.binary_search(&j).ok()?;
        (a < b).then(|| self.at(a, b))
    }

    /// All `((i, j), cost)` entries in ascending `(i, j)` order.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        let g = self.boundaries.len();
        (0..g).flat_map(move |a| {
            (a + 1..g).map(move |b| ((self.boundaries[a], self.boundaries[b]), self.at(a, b)))
        })
    }
}

pub(crate) fn validate_grid(boundaries: &[usize], n: usize) -> Result<()> {
    if boundaries.len() < 2 || boundaries[0] != 1 || *boundaries.last().unwrap() != n + 1 {
        return Err(NmcdError::input(format!(
            "boundary grid must start at 1 and end at n + 1 = {}",
            n + 1
        )));
    }
    if boundaries.windows(2).any(|w| w[0] >= w[1]) {
        return Err(NmcdError::input("boundary grid must be strictly increasing"));
    }
    Ok(())
}

/// The nonparametric segment likelihood over one sample.
#[derive(Debug, Clone)]
pub struct CostModel {
    sample: Sample,
    weights: WeightTable,
    correction: bool,
    // ln_k[k] = ln(k) for 1 <= k <= 2n + 1
    ln_k: Vec<f64>,
}

impl CostModel {
    pub fn new(sample: Sample, variant: WeightVariant, correction: bool) -> Result<Self> {
        let n = sample.len();
        let weights = WeightTable::new(n, variant)?;
        let mut ln_k = Vec::with_capacity(2 * n + 2);
        ln_k.push(0.0);
        ln_k.extend((1..=2 * n + 1).map(|k| libm::log(k as f64)));
        Ok(Self {
            sample,
            weights,
            correction,
            ln_k,
        })
    }

    pub fn sample(&self) -> &Sample {
        &self.sample
    }

    pub fn weights(&self) -> &WeightTable {
        &self.weights
    }

    pub fn correction(&self) -> bool {
        self.correction
    }

    pub fn corrected_fraction(&self, count: usize, m: usize) -> f64 {
        corrected_fraction(count, m, self.correction)
    }

    /// `H(corrected_fraction(t, m))` for `1 <= t <= m`, via the log table.
    #[inline]
    fn entropy_at(&self, t: usize, m: usize) -> f64 {
        if self.correction {
            // x = (2t - 1) / 2m, 1 - x = (2m - 2t + 1) / 2m
            let d = (2 * m) as f64;
            let (a, b) = (2 * t - 1, 2 * m - 2 * t + 1);
            let ln_d = self.ln_k[2 * m];
            (a as f64 / d) * (self.ln_k[a] - ln_d) + (b as f64 / d) * (self.ln_k[b] - ln_d)
        } else if t == m {
            0.0
        } else {
            let mf = m as f64;
            let ln_m = self.ln_k[m];
            (t as f64 / mf) * (self.ln_k[t] - ln_m)
                + ((m - t) as f64 / mf) * (self.ln_k[m - t] - ln_m)
        }
    }

    /// Cost of the segment whose sorted ranks are `ranks`.
    fn cost_of_sorted(&self, ranks: &[usize]) -> f64 {
        let m = ranks.len();
        let n = self.sample.len();
        let mut sum = 0.0;
        for t in 1..=m {
            // c_l == t for l in [ranks[t-1], next rank - 1]
            let lo = ranks[t - 1] - 1;
            let hi = if t < m { ranks[t] - 1 } else { n };
            let gap = self.weights.prefix(hi) - self.weights.prefix(lo);
            if gap != 0.0 {
                sum += self.entropy_at(t, m) * gap;
            }
        }
        m as f64 * sum
    }
}

impl SegmentCost for CostModel {
    fn n(&self) -> usize {
        self.sample.len()
    }

    fn segment_cost(&self, i: usize, j: usize) -> Result<f64> {
        let ranks = self.sample.segment_rank_multiset(i, j)?;
        Ok(self.cost_of_sorted(&ranks))
    }

    /// Sweeps each left boundary rightwards, merging the sorted ranks of each
    /// new chunk into the running multiset.
    fn pair_costs(&self, boundaries: &[usize]) -> Result<PairCosts> {
        let mut table = PairCosts::empty(boundaries, self.n())?;
        let ranks = self.sample.ranks();
        let g = boundaries.len();
        let chunks: Vec<Vec<usize>> = boundaries
            .windows(2)
            .map(|w| {
                let mut c = ranks[w[0] - 1..w[1] - 1].to_vec();
                c.sort_unstable();
                c
            })
            .collect();
        let mut acc: Vec<usize> = Vec::with_capacity(self.n());
        let mut scratch: Vec<usize> = Vec::with_capacity(self.n());
        for a in 0..g - 1 {
            acc.clear();
            for b in a + 1..g {
                merge_sorted(&acc, &chunks[b - 1], &mut scratch);
                core::mem::swap(&mut acc, &mut scratch);
                table.set(a, b, self.cost_of_sorted(&acc));
            }
        }
        Ok(table)
    }
}

fn merge_sorted(left: &[usize], right: &[usize], out: &mut Vec<usize>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < left.len() && j < right.len() {
        if left[i] <= right[j] {
            out.push(left[i]);
            i += 1;
        } else {
            out.push(right[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&left[i..]);
    out.extend_from_slice(&right[j..]);
}

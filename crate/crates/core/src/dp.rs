// SPDX-License-Identifier: MIT OR Apache-2.0

//! Exact dynamic programming over a boundary grid.
//!
//! `best(L, b)` is the largest total cost of splitting `[1, boundary[b])` into
//! `L + 1` segments whose ends lie on the grid. Each layer is built from the
//! previous one with Bellman's recursion, so a single solve yields the optimum
//! for every `L <= L_max`. Costs are accumulated left to right, matching the
//! order used by [`brute_force`], which makes the two routes bitwise comparable.
//!
//! Ties are broken towards the smallest rightmost change-point, recursively.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{NmcdError, Result};
pub use crate::segcost::PairCosts;

/// Interior change-points of a sequence of length `n`.
///
/// Each change-point is the first index of a new segment, so all lie in
/// `2..=n` and are strictly increasing. Empty means no change.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Segmentation {
    n: usize,
    change_points: Vec<usize>,
}

impl Segmentation {
    pub fn new(n: usize, change_points: Vec<usize>) -> Result<Self> {
        if n < 1 {
            return Err(NmcdError::input("segmentation needs n >= 1"));
        }
        if change_points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(NmcdError::input("change-points must be strictly increasing"));
        }
        if change_points.iter().any(|&c| c < 2 || c > n) {
            return Err(NmcdError::index(format!(
                "change-points must lie in [2, {n}]"
            )));
        }
        Ok(Self { n, change_points })
    }

    pub fn no_change(n: usize) -> Self {
        Self {
            n,
            change_points: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn change_points(&self) -> &[usize] {
        &self.change_points
    }

    /// Number of change-points.
    pub fn k(&self) -> usize {
        self.change_points.len()
    }

    /// Half-open segments `[start, end)` covering `1..=n`.
    pub fn segments(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let starts = core::iter::once(1).chain(self.change_points.iter().copied());
        let ends = self
            .change_points
            .iter()
            .copied()
            .chain(core::iter::once(self.n + 1));
        starts.zip(ends)
    }

    /// Segment id (0-based) of every index `1..=n`.
    pub fn labels(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.n);
        for (id, (s, e)) in self.segments().enumerate() {
            out.extend(core::iter::repeat_n(id, e - s));
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct DpTable {
    boundaries: Vec<usize>,
    l_max: usize,
    // best[l][b], arg[l][b]: grid positions
    best: Vec<Vec<f64>>,
    arg: Vec<Vec<usize>>,
}

impl DpTable {
    pub fn boundaries(&self) -> &[usize] {
        &self.boundaries
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn n(&self) -> usize {
        *self.boundaries.last().unwrap() - 1
    }

    /// Best total with exactly `l` change-points on the whole sequence.
    pub fn best_value(&self, l: usize) -> f64 {
        self.best[l][self.boundaries.len() - 1]
    }

    /// Best total with exactly `l` change-points on `[1, boundary)`, if
    /// `boundary` is on the grid and admits `l` interior splits.
    pub fn best_value_at(&self, l: usize, boundary: usize) -> Option<f64> {
        let b = self.boundaries.binary_search(&boundary).ok()?;
        (l <= self.l_max && b > l).then(|| self.best[l][b])
    }

    /// Best values for `L = 0..=l_max`.
    pub fn values(&self) -> Vec<f64> {
        (0..=self.l_max).map(|l| self.best_value(l)).collect()
    }

    /// Optimal segmentation with exactly `l` change-points.
    pub fn reconstruct(&self, l: usize) -> Result<Segmentation> {
        if l > self.l_max {
            return Err(NmcdError::input(format!(
                "L = {l} exceeds solved L_max = {}",
                self.l_max
            )));
        }
        let mut cps = Vec::with_capacity(l);
        let mut b = self.boundaries.len() - 1;
        for layer in (1..=l).rev() {
            b = self.arg[layer][b];
            cps.push(self.boundaries[b]);
        }
        cps.reverse();
        Segmentation::new(self.n(), cps)
    }
}

/// Solves every layer `L = 0..=l_max` over the grid of `costs`.
pub fn solve(costs: &PairCosts, l_max: usize) -> Result<DpTable> {
    let g = costs.grid_len();
    let interior = g - 2;
    if l_max > interior {
        return Err(NmcdError::input(format!(
            "L_max = {l_max} exceeds the {interior} interior grid boundaries"
        )));
    }
    let mut best = Vec::with_capacity(l_max + 1);
    let mut arg = Vec::with_capacity(l_max + 1);

    let mut layer0 = alloc::vec![f64::NEG_INFINITY; g];
    for (b, v) in layer0.iter_mut().enumerate().skip(1) {
        *v = costs.at(0, b);
    }
    best.push(layer0);
    arg.push(alloc::vec![0usize; g]);

    for l in 1..=l_max {
        let prev = &best[l - 1];
        let mut cur = alloc::vec![f64::NEG_INFINITY; g];
        let mut cur_arg = alloc::vec![0usize; g];
        // b needs l interior grid points strictly between 0 and b
        for b in l + 1..g {
            let mut top = f64::NEG_INFINITY;
            let mut top_a = l;
            for (a, &p) in prev.iter().enumerate().take(b).skip(l) {
                let v = p + costs.at(a, b);
                if v > top {
                    top = v;
                    top_a = a;
                }
            }
            cur[b] = top;
            cur_arg[b] = top_a;
        }
        best.push(cur);
        arg.push(cur_arg);
    }
    Ok(DpTable {
        boundaries: costs.boundaries().to_vec(),
        l_max,
        best,
        arg,
    })
}

/// Exhaustive search over all choices of `l` interior grid boundaries.
pub fn brute_force(costs: &PairCosts, l: usize) -> Result<(f64, Segmentation)> {
    const LIMIT: u128 = 1_000_000;
    let g = costs.grid_len();
    let interior = g - 2;
    if l > interior {
        return Err(NmcdError::input(format!(
            "L = {l} exceeds the {interior} interior grid boundaries"
        )));
    }
    if binomial(interior as u128, l as u128) > LIMIT {
        return Err(NmcdError::TooLarge(format!(
            "C({interior}, {l}) segmentations exceed {LIMIT}"
        )));
    }

    // same left-to-right order as `solve`, starting from the first segment
    let total = |combo: &[usize]| {
        let mut ends = combo.iter().copied().chain(core::iter::once(g - 1));
        let mut a = ends.next().unwrap_or(g - 1);
        let mut v = costs.at(0, a);
        for p in ends {
            v += costs.at(a, p);
            a = p;
        }
        v
    };
    // smallest rightmost boundary first, recursively
    let rev_less = |x: &[usize], y: &[usize]| x.iter().rev().lt(y.iter().rev());

    let mut combo: Vec<usize> = (1..=l).collect();
    let mut best_combo = combo.clone();
    let mut best = total(&combo);
    while next_combination(&mut combo, interior) {
        let v = total(&combo);
        if v > best || (v == best && rev_less(&combo, &best_combo)) {
            best = v;
            best_combo.clone_from(&combo);
        }
    }
    let cps = best_combo.iter().map(|&p| costs.boundaries()[p]).collect();
    Ok((best, Segmentation::new(costs.n(), cps)?))
}

// positions are 1..=max
fn next_combination(combo: &mut [usize], max: usize) -> bool {
    let k = combo.len();
    for i in (0..k).rev() {
        if combo[i] < max - (k - 1 - i) {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
        if acc > u64::MAX as u128 {
            return acc;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn table(boundaries: &[usize], f: impl FnMut(usize, usize) -> f64) -> PairCosts {
        let n = *boundaries.last().unwrap() - 1;
        PairCosts::from_fn(boundaries, n, f).unwrap()
    }

    #[test]
    fn segmentation_validation() {
        assert!(Segmentation::new(5, vec![2, 5]).is_ok());
        assert!(Segmentation::new(5, vec![1]).is_err());
        assert!(Segmentation::new(5, vec![6]).is_err());
        assert!(Segmentation::new(5, vec![3, 3]).is_err());
        let s = Segmentation::new(5, vec![3]).unwrap();
        assert_eq!(s.labels(), vec![0, 0, 1, 1, 1]);
        assert_eq!(s.segments().collect::<Vec<_>>(), vec![(1, 3), (3, 6)]);
    }

    #[test]
    fn zero_layer_is_whole_segment() {
        let c = table(&[1, 2, 3, 4, 5], |i, j| -((j - i) as f64).powi(2));
        let t = solve(&c, 0).unwrap();
        assert_eq!(t.best_value(0), -16.0);
        assert_eq!(t.reconstruct(0).unwrap().k(), 0);
        assert_eq!(brute_force(&c, 0).unwrap().0, -16.0);
    }

    #[test]
    fn forced_full_split() {
        let c = table(&[1, 2, 3, 4, 5], |i, j| -((j - i) as f64).powi(2));
        let t = solve(&c, 3).unwrap();
        assert_eq!(t.reconstruct(3).unwrap().change_points(), &[2, 3, 4]);
        assert!(solve(&c, 4).is_err());
        assert!(t.reconstruct(4).is_err());
    }

    #[test]
    fn single_interior_boundary() {
        let c = table(&[1, 4, 9], |i, j| (i * j) as f64);
        let (v, s) = brute_force(&c, 1).unwrap();
        assert_eq!(s.change_points(), &[4]);
        assert_eq!(v, 4.0 + 36.0);
    }

    #[test]
    fn ties_pick_smallest_rightmost() {
        let c = table(&[1, 2, 3, 4, 5], |_, _| 0.0);
        let t = solve(&c, 2).unwrap();
        assert_eq!(t.reconstruct(1).unwrap().change_points(), &[2]);
        assert_eq!(t.reconstruct(2).unwrap().change_points(), &[2, 3]);
        assert_eq!(brute_force(&c, 2).unwrap().1.change_points(), &[2, 3]);
    }

    #[test]
    fn infeasible_segments() {
        // segments shorter than 2 are infeasible
        let c = table(&[1, 2, 3, 4, 5, 6, 7], |i, j| {
            if j - i < 2 { f64::NEG_INFINITY } else { -((j - i) as f64) }
        });
        let t = solve(&c, 3).unwrap();
        assert_eq!(t.best_value(2), -6.0);
        assert_eq!(t.best_value(3), f64::NEG_INFINITY);
        let s = t.reconstruct(2).unwrap();
        assert_eq!(s.change_points(), &[3, 5]);
        assert_eq!(brute_force(&c, 2).unwrap().1, s);
    }

    #[test]
    fn brute_force_refuses_large_instances() {
        let bounds: Vec<usize> = (1..=60).collect();
        let c = table(&bounds, |_, _| 0.0);
        assert!(matches!(brute_force(&c, 10), Err(NmcdError::TooLarge(_))));
    }

    #[test]
    fn combination_enumeration() {
        let mut c = vec![1, 2];
        let mut seen = vec![c.clone()];
        while next_combination(&mut c, 4) {
            seen.push(c.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen.last().unwrap(), &vec![3, 4]);
        assert_eq!(binomial(10, 3), 120);
    }
}

// SPDX-License-Identifier: MIT OR Apache-2.0

//! Screening, segment costs, dynamic programming and BIC wired together.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::dp::{self, Segmentation};
use crate::empirical::{Sample, WeightVariant};
use crate::error::{NmcdError, Result};
use crate::modelselect::{self, BicTrace, DEFAULT_ZETA_EXPONENT};
use crate::screen::{self, CandidateSet};
use crate::segcost::{CostModel, PairCosts, SegmentCost};

/// Smallest input accepted when screening is on.
pub const MIN_SCREENED_LEN: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct DetectConfig {
    pub weight: WeightVariant,
    pub correction: bool,
    pub screening: bool,
    /// Screening half-window; `ceil((ln n)^{3/2} / 2)` when unset.
    pub window: Option<usize>,
    /// Penalty per change-point; `(ln n)^{zeta_exponent} / 2` when unset.
    pub zeta: Option<f64>,
    pub zeta_exponent: f64,
    /// Largest number of change-points considered; the grid size when unset.
    pub k_bar: Option<usize>,
    /// Skip the BIC and return the best segmentation with this many change-points.
    pub known_k: Option<usize>,
    /// Let the BIC pick zero change-points.
    pub allow_zero: bool,
}

impl Default for DetectConfig {
    fn default() -> Self {
        Self {
            weight: WeightVariant::Zhang,
            correction: true,
            screening: true,
            window: None,
            zeta: None,
            zeta_exponent: DEFAULT_ZETA_EXPONENT,
            k_bar: None,
            known_k: None,
            allow_zero: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Warning {
    /// Screening kept no candidate; the full grid was used instead.
    EmptyScreen,
    /// The requested upper bound exceeded the grid and was lowered.
    KBarCapped { requested: usize, used: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionResult {
    pub segmentation: Segmentation,
    pub k_hat: usize,
    /// Absent when the number of change-points was given.
    pub bic: Option<BicTrace>,
    /// Absent when screening was off.
    pub candidates: Option<CandidateSet>,
    /// Boundary grid the DP ran on (starts at 1, ends at n + 1).
    pub grid: Vec<usize>,
    /// Optimal segmentation for each `L = 0..=L_max` solved.
    pub per_l: Vec<Segmentation>,
    /// Objective value of `segmentation`.
    pub loglik: f64,
    pub warnings: Vec<Warning>,
}

/// Full NMCD detection on raw observations.
pub fn detect(values: &[f64], config: &DetectConfig) -> Result<DetectionResult> {
    validate(config)?;
    let n = values.len();
    let min_len = if config.screening { MIN_SCREENED_LEN } else { 3 };
    if n < min_len {
        return Err(NmcdError::input(format!(
            "need at least {min_len} observations, got {n}"
        )));
    }
    let sample = Sample::new(values)?;
    let mut warnings = Vec::new();

    let (grid, candidates) = if config.screening {
        let window = config.window.unwrap_or_else(|| screen::default_window(n));
        let cands = screen::scan(&sample, window)?;
        let grid = if cands.is_empty() {
            warnings.push(Warning::EmptyScreen);
            full_grid(n)
        } else {
            let mut g = Vec::with_capacity(cands.len() + 2);
            g.push(1);
            g.extend(cands.change_points());
            g.push(n + 1);
            g
        };
        (grid, Some(cands))
    } else {
        (full_grid(n), None)
    };

    let default_k_bar = match &candidates {
        Some(c) if !c.is_empty() => c.len(),
        _ => grid.len() - 2,
    };
    let zeta = config
        .zeta
        .unwrap_or_else(|| modelselect::zeta(n, config.zeta_exponent));

    let model = CostModel::new(sample, config.weight, config.correction)?;
    let costs = model.pair_costs(&grid)?;
    let mut res = optimize(
        &costs,
        Selection {
            known_k: config.known_k,
            k_bar: config.k_bar.unwrap_or(default_k_bar),
            l_min: usize::from(!config.allow_zero),
            zeta,
        },
        &mut warnings,
    )?;
    res.candidates = candidates;
    res.warnings = warnings;
    Ok(res)
}

fn validate(config: &DetectConfig) -> Result<()> {
    if config.known_k == Some(0) {
        return Err(NmcdError::input("known K must be at least 1"));
    }
    if config.k_bar == Some(0) && !config.allow_zero {
        return Err(NmcdError::input("upper bound on K must be positive"));
    }
    if let Some(z) = config.zeta {
        if !(z.is_finite() && z > 0.0) {
            return Err(NmcdError::input(format!("penalty must be positive, got {z}")));
        }
    }
    if !(config.zeta_exponent.is_finite() && config.zeta_exponent > 0.0) {
        return Err(NmcdError::input("penalty exponent must be positive"));
    }
    Ok(())
}

pub(crate) fn full_grid(n: usize) -> Vec<usize> {
    (1..=n + 1).collect()
}

pub(crate) struct Selection {
    pub known_k: Option<usize>,
    pub k_bar: usize,
    pub l_min: usize,
    pub zeta: f64,
}

/// DP plus either known-K reconstruction or BIC selection, over any costs.
pub(crate) fn optimize(
    costs: &PairCosts,
    sel: Selection,
    warnings: &mut Vec<Warning>,
) -> Result<DetectionResult> {
    let interior = costs.grid_len() - 2;
    let grid = costs.boundaries().to_vec();

    if let Some(k) = sel.known_k {
        if k > interior {
            return Err(NmcdError::input(format!(
                "known K = {k} exceeds the {interior} available grid boundaries"
            )));
        }
        let table = dp::solve(costs, k)?;
        let per_l = (0..=k).map(|l| table.reconstruct(l)).collect::<Result<Vec<_>>>()?;
        return Ok(DetectionResult {
            segmentation: per_l[k].clone(),
            k_hat: k,
            bic: None,
            candidates: None,
            grid,
            per_l,
            loglik: table.best_value(k),
            warnings: Vec::new(),
        });
    }

    let k_bar = if sel.k_bar > interior {
        warnings.push(Warning::KBarCapped {
            requested: sel.k_bar,
            used: interior,
        });
        interior
    } else {
        sel.k_bar
    };
    if k_bar < sel.l_min {
        return Err(NmcdError::input(
            "no grid boundary available for a change-point",
        ));
    }
    let table = dp::solve(costs, k_bar)?;
    let values: BTreeMap<usize, f64> = (0..=k_bar).map(|l| (l, table.best_value(l))).collect();
    let trace = modelselect::select(&values, sel.zeta, sel.l_min, k_bar)?;
    let per_l = (0..=k_bar)
        .map(|l| table.reconstruct(l))
        .collect::<Result<Vec<_>>>()?;
    let k_hat = trace.k_hat;
    Ok(DetectionResult {
        segmentation: per_l[k_hat].clone(),
        k_hat,
        loglik: table.best_value(k_hat),
        bic: Some(trace),
        candidates: None,
        grid,
        per_l,
        warnings: Vec::new(),
    })
}

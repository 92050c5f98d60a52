// SPDX-License-Identifier: MIT OR Apache-2.0

//! BIC choice of the number of change-points.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{NmcdError, Result};

pub const DEFAULT_ZETA_EXPONENT: f64 = 2.1;

/// `(ln n)^{exponent} / 2`.
pub fn zeta(n: usize, exponent: f64) -> f64 {
    libm::pow(libm::log(n as f64), exponent) / 2.0
}

/// `(ln n)^{2.1} / 2`.
pub fn default_zeta(n: usize) -> f64 {
    zeta(n, DEFAULT_ZETA_EXPONENT)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BicEntry {
    pub l: usize,
    pub max_loglik: f64,
    pub bic: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BicTrace {
    pub zeta: f64,
    pub l_min: usize,
    pub k_bar: usize,
    pub entries: Vec<BicEntry>,
    pub k_hat: usize,
}

impl BicTrace {
    pub fn entry(&self, l: usize) -> Option<&BicEntry> {
        self.entries.iter().find(|e| e.l == l)
    }
}

/// `BIC_L = -max_loglik(L) + L * zeta` for every `L` in `l_min..=k_bar`;
/// `k_hat` is the first minimizer.
pub fn select(
    dp_values: &BTreeMap<usize, f64>,
    zeta: f64,
    l_min: usize,
    k_bar: usize,
) -> Result<BicTrace> {
    if l_min > 1 {
        return Err(NmcdError::input(format!("L_min must be 0 or 1, got {l_min}")));
    }
    if k_bar < l_min {
        return Err(NmcdError::input(format!(
            "upper bound {k_bar} is below L_min = {l_min}"
        )));
    }
    let mut entries = Vec::with_capacity(k_bar - l_min + 1);
    for l in l_min..=k_bar {
        let v = *dp_values
            .get(&l)
            .ok_or_else(|| NmcdError::input(format!("no likelihood for L = {l}")))?;
        entries.push(BicEntry {
            l,
            max_loglik: v,
            bic: -v + l as f64 * zeta,
        });
    }
    let mut k_hat = entries[0].l;
    let mut low = entries[0].bic;
    for e in &entries[1..] {
        if e.bic < low {
            low = e.bic;
            k_hat = e.l;
        }
    }
    Ok(BicTrace {
        zeta,
        l_min,
        k_bar,
        entries,
        k_hat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn values(pairs: &[(usize, f64)]) -> BTreeMap<usize, f64> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn zeta_defaults() {
        assert!((default_zeta(1000) - 28.945268701526796).abs() < 1e-9);
        assert!((default_zeta(500) - 23.181357907714148).abs() < 1e-9);
        let z = zeta(8811, 2.0);
        assert!((z - 41.25731353098376).abs() < 1e-9);
        assert_eq!(libm::round(z), 41.0);
    }

    #[test]
    fn arithmetic_example() {
        let t = select(&values(&[(1, -10.0), (2, -9.0), (3, -8.9)]), 2.0, 1, 3).unwrap();
        let bics: Vec<f64> = t.entries.iter().map(|e| e.bic).collect();
        assert_eq!(bics[0], 12.0);
        assert_eq!(bics[1], 13.0);
        assert!((bics[2] - 14.9).abs() < 1e-12);
        assert_eq!(t.k_hat, 1);
    }

    #[test]
    fn ties_go_to_smaller_l() {
        let t = select(&values(&[(1, -10.0), (2, -8.0)]), 2.0, 1, 2).unwrap();
        assert_eq!(t.entries[0].bic, t.entries[1].bic);
        assert_eq!(t.k_hat, 1);
    }

    #[test]
    fn missing_and_bad_ranges() {
        assert!(select(&values(&[(1, -1.0)]), 1.0, 1, 2).is_err());
        assert!(select(&values(&[(1, -1.0)]), 1.0, 2, 2).is_err());
        assert!(select(&values(&[(1, -1.0)]), 1.0, 1, 0).is_err());
    }

    #[test]
    fn infeasible_layers_never_win() {
        let t = select(
            &values(&[(0, -5.0), (1, f64::NEG_INFINITY)]),
            0.0,
            0,
            1,
        )
        .unwrap();
        assert_eq!(t.k_hat, 0);
    }
}

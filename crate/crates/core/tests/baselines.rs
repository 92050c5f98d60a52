// SPDX-License-Identifier: MIT OR Apache-2.0

use nmcd_core::baselines::{ls_mean_cost, pl_detect, LeastSquares, PlConfig, PlCriterion};
use nmcd_core::simgen::replication_rng;
use nmcd_core::SegmentCost;
use proptest::prelude::*;
use rand_distr::{Distribution, StandardNormal};

proptest! {
    #[test]
    fn mean_cost_ignores_translation(
        x in prop::collection::vec(-100i32..100, 3..40),
        shift in -64i32..64,
    ) {
        let a: Vec<f64> = x.iter().map(|&v| f64::from(v)).collect();
        let b: Vec<f64> = x.iter().map(|&v| f64::from(v + shift)).collect();
        let n = a.len();
        let grid: Vec<usize> = (1..=n + 1).collect();
        let ta = LeastSquares::new(&a, PlCriterion::Mean).unwrap().pair_costs(&grid).unwrap();
        let tb = LeastSquares::new(&b, PlCriterion::Mean).unwrap().pair_costs(&grid).unwrap();
        for ((i, j), v) in ta.entries() {
            let w = tb.get(i, j).unwrap();
            prop_assert!((v - w).abs() <= 1e-9 * v.abs().max(1.0), "[{},{}) {} {}", i, j, v, w);
        }
    }

    #[test]
    fn mean_cost_ignores_translation_of_real_data(
        x in prop::collection::vec(-10.0f64..10.0, 3..30),
        shift in -100.0f64..100.0,
    ) {
        let y: Vec<f64> = x.iter().map(|v| v + shift).collect();
        let n = x.len();
        for i in 1..=n {
            for j in i + 1..=n + 1 {
                let a = ls_mean_cost(&x, i, j).unwrap();
                let b = ls_mean_cost(&y, i, j).unwrap();
                prop_assert!((a - b).abs() <= 1e-8 * a.abs().max(1.0));
            }
        }
    }
}

#[test]
fn meanvar_sees_scale_changes_that_mean_misses() {
    let cfg = PlConfig {
        k_bar: 5,
        allow_zero: true,
        ..PlConfig::default()
    };
    let near = |res: &nmcd_core::DetectionResult| res.per_l[1].change_points()[0].abs_diff(201) <= 10;
    let (mut mv_hits, mut m_hits, mut mv_selected) = (0, 0, 0);
    for r in 0..20 {
        let mut g = replication_rng(5, r);
        let x: Vec<f64> = (0..400)
            .map(|i| {
                let z: f64 = StandardNormal.sample(&mut g);
                if i < 200 { z } else { 5.0 * z }
            })
            .collect();
        let mv = pl_detect(&x, PlCriterion::MeanVar, &cfg).unwrap();
        let m = pl_detect(&x, PlCriterion::Mean, &cfg).unwrap();
        mv_hits += usize::from(near(&mv));
        m_hits += usize::from(near(&m));
        mv_selected += usize::from(mv.k_hat >= 1 && near(&mv));
    }
    eprintln!("meanvar {mv_hits}/{mv_selected}, mean {m_hits}");
    assert!(mv_hits >= 18 && mv_selected >= 18, "{mv_hits} {mv_selected}");
    assert!(m_hits + 8 <= mv_hits, "mean {m_hits} vs meanvar {mv_hits}");
}

// SPDX-License-Identifier: MIT OR Apache-2.0

use std::collections::BTreeMap;

use nmcd_core::modelselect::{default_zeta, select, zeta};
use proptest::prelude::*;

fn curve() -> impl Strategy<Value = BTreeMap<usize, f64>> {
    prop::collection::vec(0.0f64..50.0, 1..25).prop_map(|gains| {
        let mut v = -500.0;
        let mut m = BTreeMap::new();
        m.insert(0, v);
        for (l, g) in gains.into_iter().enumerate() {
            v += g;
            m.insert(l + 1, v);
        }
        m
    })
}

#[test]
fn penalty_anchors() {
    assert!((default_zeta(1000) - 28.945268701526796).abs() < 1e-12);
    assert!((default_zeta(500) - 23.181357907714148).abs() < 1e-12);
    assert_eq!(zeta(8811, 2.0).round(), 41.0);
}

proptest! {
    #[test]
    fn shift_leaves_choice_unchanged(values in curve(), shift in -1e3f64..1e3, z in 0.1f64..30.0, l_min in 0usize..2) {
        let k_bar = *values.keys().last().unwrap();
        prop_assume!(k_bar >= l_min);
        let a = select(&values, z, l_min, k_bar).unwrap();
        // shifts by a dyadic step keep every sum exact
        let s = (shift * 8.0).round() / 8.0;
        let shifted = values.iter().map(|(&l, &v)| (l, v + s)).collect();
        let b = select(&shifted, z, l_min, k_bar).unwrap();
        prop_assert_eq!(a.k_hat, b.k_hat);
    }

    #[test]
    fn larger_penalty_never_adds_change_points(values in curve(), z1 in 0.1f64..30.0, dz in 0.0f64..30.0) {
        let k_bar = *values.keys().last().unwrap();
        let a = select(&values, z1, 0, k_bar).unwrap();
        let b = select(&values, z1 + dz, 0, k_bar).unwrap();
        prop_assert!(b.k_hat <= a.k_hat);
    }

    #[test]
    fn trace_recomputes_bitwise(values in curve(), z in 0.1f64..30.0) {
        let k_bar = *values.keys().last().unwrap();
        let t = select(&values, z, 1.min(k_bar), k_bar).unwrap();
        for e in &t.entries {
            prop_assert_eq!(e.max_loglik, values[&e.l]);
            prop_assert_eq!((-e.max_loglik + e.l as f64 * t.zeta).to_bits(), e.bic.to_bits());
        }
        let best = t.entries.iter().map(|e| e.bic).fold(f64::INFINITY, f64::min);
        prop_assert_eq!(t.entry(t.k_hat).unwrap().bic, best);
        prop_assert!(t.entries.iter().take_while(|e| e.l < t.k_hat).all(|e| e.bic > best));
    }
}

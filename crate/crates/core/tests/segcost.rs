// SPDX-License-Identifier: MIT OR Apache-2.0

mod common;

use common::{close, direct_cost, random_series, rng};
use nmcd_core::{CostModel, Sample, SegmentCost, WeightVariant};
use proptest::prelude::*;

fn model(x: &[f64], variant: WeightVariant, correction: bool) -> CostModel {
    CostModel::new(Sample::new(x).unwrap(), variant, correction).unwrap()
}

#[test]
fn matches_direct_summation() {
    let mut r = rng(1);
    for case in 0..60 {
        let n = 5 + case % 40;
        let x = random_series(&mut r, n, case % 3 == 0);
        for (variant, zhang) in [(WeightVariant::Zhang, true), (WeightVariant::Uniform, false)] {
            for correction in [true, false] {
                let cm = model(&x, variant, correction);
                for i in 1..=n {
                    for j in i + 1..=n + 1 {
                        let got = cm.segment_cost(i, j).unwrap();
                        let want = direct_cost(&x, i, j, zhang, correction);
                        assert!(close(got, want, 1e-9), "n={n} [{i},{j}) {zhang} {correction} {got} vs {want} {x:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn grid_sweep_equals_segment_cost() {
    let mut r = rng(2);
    for case in 0..40 {
        let n = 10 + case * 7;
        let x = random_series(&mut r, n, case % 2 == 0);
        let cm = model(&x, WeightVariant::Zhang, true);
        let mut grid: Vec<usize> = (2..=n).filter(|_| r.random_bool(0.3)).collect();
        grid.insert(0, 1);
        grid.push(n + 1);
        let table = cm.pair_costs(&grid).unwrap();
        for ((i, j), v) in table.entries() {
            assert_eq!(v.to_bits(), cm.segment_cost(i, j).unwrap().to_bits(), "[{i},{j})");
        }
    }
}

#[test]
fn three_boundary_grid() {
    let x = [0.4, -0.3, 2.2, 1.7, 3.1, 2.9, 0.1, -0.8];
    let cm = model(&x, WeightVariant::Zhang, false);
    let t = cm.pair_costs(&[1, 4, 9]).unwrap();
    assert_eq!(t.entries().count(), 3);
    let whole = t.get(1, 9).unwrap();
    assert!(t.get(1, 4).unwrap() + t.get(4, 9).unwrap() >= whole);
    assert_eq!(whole, cm.segment_cost(1, 9).unwrap());
}

use rand::Rng;

fn series() -> impl Strategy<Value = Vec<f64>> {
    prop_oneof![
        prop::collection::vec(-50.0f64..50.0, 3..40),
        prop::collection::vec((-5i32..5).prop_map(f64::from), 3..40),
    ]
}

fn segment_of(n: usize) -> impl Strategy<Value = (usize, usize)> {
    (1..=n).prop_flat_map(move |i| (Just(i), i + 1..=n + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rank_invariance(x in series(), correction: bool) {
        let n = x.len();
        let a = model(&x, WeightVariant::Zhang, correction);
        let y: Vec<f64> = x.iter().map(|v| (v / 10.0).exp()).collect();
        let z: Vec<f64> = x.iter().map(|v| 2.0 * v + 7.0).collect();
        let b = model(&y, WeightVariant::Zhang, correction);
        let c = model(&z, WeightVariant::Zhang, correction);
        prop_assert_eq!(a.sample().ranks(), b.sample().ranks());
        for i in 1..=n {
            for j in i + 1..=n + 1 {
                let v = a.segment_cost(i, j).unwrap();
                prop_assert_eq!(v, b.segment_cost(i, j).unwrap());
                prop_assert_eq!(v, c.segment_cost(i, j).unwrap());
            }
        }
    }

    #[test]
    fn costs_are_nonpositive(x in series(), uniform: bool, correction: bool) {
        let v = if uniform { WeightVariant::Uniform } else { WeightVariant::Zhang };
        let cm = model(&x, v, correction);
        let n = x.len();
        for i in 1..=n {
            for j in i + 1..=n + 1 {
                prop_assert!(cm.segment_cost(i, j).unwrap() <= 0.0);
            }
        }
    }

    #[test]
    fn splitting_never_lowers_the_likelihood(
        (x, i, k, j) in series().prop_flat_map(|x| {
            let n = x.len();
            (Just(x), 1..n).prop_flat_map(move |(x, i)| {
                (Just(x), Just(i), i + 1..=n).prop_flat_map(move |(x, i, k)| {
                    (Just(x), Just(i), Just(k), k + 1..=n + 1)
                })
            })
        }),
        uniform: bool,
    ) {
        let v = if uniform { WeightVariant::Uniform } else { WeightVariant::Zhang };
        let cm = model(&x, v, false);
        let whole = cm.segment_cost(i, j).unwrap();
        let split = cm.segment_cost(i, k).unwrap() + cm.segment_cost(k, j).unwrap();
        prop_assert!(split >= whole - 1e-9 * whole.abs().max(1.0), "{} < {}", split, whole);
    }

    #[test]
    fn multisets_merge(
        (x, i, k, j) in series().prop_flat_map(|x| {
            let n = x.len();
            (Just(x), 1..n).prop_flat_map(move |(x, i)| {
                (Just(x), Just(i), i + 1..=n).prop_flat_map(move |(x, i, k)| {
                    (Just(x), Just(i), Just(k), k + 1..=n + 1)
                })
            })
        })
    ) {
        let s = Sample::new(&x).unwrap();
        let mut merged = s.segment_rank_multiset(i, k).unwrap();
        merged.extend(s.segment_rank_multiset(k, j).unwrap());
        merged.sort_unstable();
        prop_assert_eq!(merged, s.segment_rank_multiset(i, j).unwrap());
    }

    #[test]
    fn sample_orders_values(x in series()) {
        let s = Sample::new(&x).unwrap();
        prop_assert_eq!(s.ranks(), &common::ranks(&x)[..]);
        for (v, &r) in x.iter().zip(s.ranks()) {
            prop_assert_eq!(*v, s.order_statistic(r));
        }
    }

    #[test]
    fn prefix_weights_accumulate(n in 2usize..300, uniform: bool) {
        let v = if uniform { WeightVariant::Uniform } else { WeightVariant::Zhang };
        let t = nmcd_core::WeightTable::new(n, v).unwrap();
        prop_assert_eq!(t.prefix(0), 0.0);
        for l in 1..=n {
            prop_assert!(t.prefix(l) >= t.prefix(l - 1));
        }
        prop_assert!((t.prefix(n) - t.total()).abs() <= 1e-12 * t.total().max(1.0));
    }

    #[test]
    fn direct_oracle_on_arbitrary_segments(
        (x, (i, j)) in series().prop_flat_map(|x| { let n = x.len(); (Just(x), segment_of(n)) }),
        correction: bool,
    ) {
        let cm = model(&x, WeightVariant::Zhang, correction);
        let got = cm.segment_cost(i, j).unwrap();
        let want = direct_cost(&x, i, j, true, correction);
        prop_assert!(close(got, want, 1e-9), "{} vs {}", got, want);
    }
}

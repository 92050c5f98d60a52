// SPDX-License-Identifier: MIT OR Apache-2.0

//! Nonparametric maximum-likelihood multiple change-point detection.
//!
//! Segments are scored by a rank-based integrated Bernoulli log-likelihood of
//! their empirical CDFs, an exact dynamic program finds the best segmentation
//! for every number of change-points over a (screened) boundary grid, and a
//! BIC picks the number of change-points.
//!
//! Conventions used across the crate:
//! - Observations are indexed `1..=n`.
//! - A change-point `tau` is the first index of a new segment, so interior
//!   change-points lie in `2..=n`; a segment is the half-open range
//!   `[i, j)` with `1 <= i < j <= n + 1`.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod baselines;
pub mod dp;
pub mod empirical;
mod error;
pub mod metrics;
pub mod modelselect;
pub mod pipeline;
pub mod screen;
pub mod segcost;
pub mod simgen;

pub use dp::{DpTable, PairCosts, Segmentation};
pub use empirical::{Sample, WeightTable, WeightVariant};
pub use error::{NmcdError, Result};
pub use modelselect::BicTrace;
pub use pipeline::{detect, DetectConfig, DetectionResult};
pub use screen::CandidateSet;
pub use segcost::{CostModel, SegmentCost};

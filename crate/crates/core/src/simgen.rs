// SPDX-License-Identifier: MIT OR Apache-2.0

//! Seeded simulation models with known change-points.
//!
//! Randomness comes from ChaCha20 (`rand_chacha`), seeded with the 64-bit
//! master seed and switched to the replication's stream, so replication `r`
//! of a study is reproducible on its own and on any platform.
//!
//! A jump at `tau` affects indices `i >= tau`, making `tau` the first index of
//! the new segment.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{ChiSquared, Distribution, Normal, StudentT};

use crate::dp::Segmentation;
use crate::error::{NmcdError, Result};

pub const BLOCKS_LOCATIONS: [f64; 11] = [
    0.1, 0.13, 0.15, 0.23, 0.25, 0.40, 0.44, 0.65, 0.76, 0.78, 0.81,
];
pub const BLOCKS_JUMPS: [f64; 11] = [
    2.01, -2.51, 1.51, -2.01, 2.51, -2.11, 1.05, 2.16, -1.56, 2.56, -2.11,
];
pub const MEANSCALE_LOCATIONS: [f64; 4] = [0.20, 0.40, 0.65, 0.85];
pub const MEANSCALE_JUMPS: [f64; 4] = [3.0, 0.0, -2.0, 0.0];
pub const MEANSCALE_FACTORS: [f64; 4] = [1.0, 5.0, 1.0, 0.25];
pub const SHAPE_LOCATIONS: [f64; 3] = [0.20, 0.50, 0.75];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// Piecewise-constant "blocks" signal, 11 mean changes.
    Blocks,
    /// Two mean changes and two scale changes.
    MeanScale,
    /// Normal, standardized chi2(3), standardized chi2(1), normal: no change in
    /// mean or variance. Ignores `sigma` and the error law.
    Shape,
    /// `ceil(0.4 sqrt n)` alternating mean jumps of about +-1.5 at random places.
    DivergingMean,
    /// `ceil(0.2 sqrt n)` alternating scale jumps of about x5 at random places.
    DivergingScale,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorDist {
    Normal,
    /// Student t with 3 degrees of freedom.
    T3,
    /// `(chi2_1 - 1) / sqrt 2`.
    ChiSq1,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSpec {
    pub model: Model,
    pub n: usize,
    pub sigma: f64,
    pub error: ErrorDist,
    pub seed: u64,
    /// ChaCha stream, normally the replication index.
    pub stream: u64,
}

impl SimSpec {
    pub fn new(model: Model, n: usize, sigma: f64, error: ErrorDist, seed: u64) -> Self {
        Self {
            model,
            n,
            sigma,
            error,
            seed,
            stream: 0,
        }
    }

    pub fn replication(mut self, r: u64) -> Self {
        self.stream = r;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 20 {
            return Err(NmcdError::input(format!("simulation needs n >= 20, got {}", self.n)));
        }
        if self.model != Model::Shape && !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(NmcdError::input(format!("sigma must be positive, got {}", self.sigma)));
        }
        Ok(())
    }
}

/// Generator for replication `stream` of a study seeded with `seed`.
pub fn replication_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn draw_error<R: Rng + ?Sized>(rng: &mut R, dist: ErrorDist) -> f64 {
    match dist {
        ErrorDist::Normal => rng.sample(Normal::new(0.0, 1.0).unwrap()),
        ErrorDist::T3 => StudentT::new(3.0).unwrap().sample(rng),
        ErrorDist::ChiSq1 => standardized_chi2(rng, 1.0),
    }
}

fn standardized_chi2<R: Rng + ?Sized>(rng: &mut R, k: f64) -> f64 {
    let x = ChiSquared::new(k).unwrap().sample(rng);
    (x - k) / libm::sqrt(2.0 * k)
}

fn fixed_locations(n: usize, q: &[f64]) -> Vec<usize> {
    q.iter().map(|&p| libm::round(n as f64 * p) as usize).collect()
}

/// Sorted `round(n U)` draws, redrawn until every gap (boundaries included)
/// is at least 2.
fn random_locations<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Result<Vec<usize>> {
    for _ in 0..10_000 {
        let mut taus: Vec<usize> = (0..k)
            .map(|_| libm::round(n as f64 * rng.random::<f64>()) as usize)
            .collect();
        taus.sort_unstable();
        let ok = core::iter::once(1)
            .chain(taus.iter().copied())
            .zip(taus.iter().copied().chain(core::iter::once(n + 1)))
            .all(|(a, b)| b >= a + 2);
        if ok {
            return Ok(taus);
        }
    }
    Err(NmcdError::input(format!(
        "could not place {k} separated change-points in n = {n}"
    )))
}

fn diverging_count(n: usize, c: f64) -> usize {
    libm::ceil(c * libm::sqrt(n as f64)) as usize
}

/// Mean and scale of every index given jumps at `taus`.
fn compose<R: Rng + ?Sized>(
    rng: &mut R,
    spec: &SimSpec,
    taus: &[usize],
    jumps: &[f64],
    factors: Option<&[f64]>,
) -> Vec<f64> {
    let mut out = Vec::with_capacity(spec.n);
    let mut level = 0.0;
    let mut scale = spec.sigma;
    let mut next = 0;
    for i in 1..=spec.n {
        while next < taus.len() && i >= taus[next] {
            level += jumps[next];
            if let Some(v) = factors {
                scale *= v[next];
            }
            next += 1;
        }
        out.push(level + scale * draw_error(rng, spec.error));
    }
    out
}

/// Data and true change-points for `spec`.
pub fn generate(spec: &SimSpec) -> Result<(Vec<f64>, Segmentation)> {
    spec.validate()?;
    let n = spec.n;
    let mut rng = replication_rng(spec.seed, spec.stream);
    let (values, taus) = match spec.model {
        Model::Blocks => {
            let taus = fixed_locations(n, &BLOCKS_LOCATIONS);
            (compose(&mut rng, spec, &taus, &BLOCKS_JUMPS, None), taus)
        }
        Model::MeanScale => {
            let taus = fixed_locations(n, &MEANSCALE_LOCATIONS);
            let x = compose(
                &mut rng,
                spec,
                &taus,
                &MEANSCALE_JUMPS,
                Some(&MEANSCALE_FACTORS),
            );
            (x, taus)
        }
        Model::Shape => {
            let taus = fixed_locations(n, &SHAPE_LOCATIONS);
            let mut x = Vec::with_capacity(n);
            let normal = Normal::new(0.0, 1.0).unwrap();
            for i in 1..=n {
                let seg = taus.iter().filter(|&&t| i >= t).count();
                x.push(match seg {
                    1 => standardized_chi2(&mut rng, 3.0),
                    2 => standardized_chi2(&mut rng, 1.0),
                    _ => normal.sample(&mut rng),
                });
            }
            (x, taus)
        }
        Model::DivergingMean => {
            let k = diverging_count(n, 0.4);
            let taus = random_locations(&mut rng, n, k)?;
            let nu = Normal::new(0.0, 0.2).unwrap();
            let jumps: Vec<f64> = (1..=k)
                .map(|j| {
                    let base = if j % 2 == 1 { -1.5 } else { 1.5 };
                    base + nu.sample(&mut rng)
                })
                .collect();
            (compose(&mut rng, spec, &taus, &jumps, None), taus)
        }
        Model::DivergingScale => {
            let k = diverging_count(n, 0.2);
            let taus = random_locations(&mut rng, n, k)?;
            let nu = Normal::new(0.0, 0.2).unwrap();
            let factors: Vec<f64> = (1..=k)
                .map(|j| {
                    let f = 5.0 + nu.sample(&mut rng);
                    if j % 2 == 1 { 1.0 / f } else { f }
                })
                .collect();
            let jumps = alloc::vec![0.0; k];
            (compose(&mut rng, spec, &taus, &jumps, Some(&factors)), taus)
        }
    };
    Ok((values, Segmentation::new(n, taus)?))
}

/// Shortest segment length, counting the implicit boundaries 1 and n + 1.
pub fn segment_spacing(truth: &Segmentation) -> usize {
    truth.segments().map(|(s, e)| e - s).min().unwrap_or(truth.n())
}

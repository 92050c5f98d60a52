// SPDX-License-Identifier: MIT OR Apache-2.0

//! Monte Carlo harness: repeated simulation, detection and scoring.
//!
//! Replication `r` draws its data from ChaCha stream `r` of the master seed,
//! so results do not depend on how replications are spread across threads.

use std::str::FromStr;
use std::time::Instant;

use nmcd_core::baselines::{pl_detect, PlConfig, PlCriterion};
use nmcd_core::metrics::{rand_index, xi};
use nmcd_core::simgen::{generate, SimSpec};
use nmcd_core::{detect, DetectConfig, DetectionResult, NmcdError, WeightVariant};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Nonparametric detector with the tail-emphasizing weight.
    Nmcd,
    /// Nonparametric detector with the uniform weight.
    NmcdUniform,
    PlMean,
    PlMeanvar,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Nmcd => "nmcd",
            Method::NmcdUniform => "nmcd-uniform",
            Method::PlMean => "pl-mean",
            Method::PlMeanvar => "pl-meanvar",
        }
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "nmcd" => Ok(Method::Nmcd),
            "nmcd-uniform" | "nmcd*" => Ok(Method::NmcdUniform),
            "pl-mean" => Ok(Method::PlMean),
            "pl-meanvar" => Ok(Method::PlMeanvar),
            other => Err(format!(
                "unknown method {other:?} (expected nmcd, nmcd-uniform, pl-mean, pl-meanvar)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodOptions {
    /// Give every method the true number of change-points.
    pub known_k: bool,
    /// Upper bound on K for NMCD; the screened set size when unset.
    pub nmcd_k_bar: Option<usize>,
    /// Upper bound on K for the least-squares baselines.
    pub pl_k_bar: usize,
    /// Base configuration for the nonparametric methods.
    pub nmcd: DetectConfig,
}

impl Default for MethodOptions {
    fn default() -> Self {
        Self {
            known_k: false,
            nmcd_k_bar: None,
            pl_k_bar: 30,
            nmcd: DetectConfig::default(),
        }
    }
}

/// Run one method on one dataset.
pub fn run_method(
    method: Method,
    values: &[f64],
    known_k: Option<usize>,
    opts: &MethodOptions,
) -> Result<DetectionResult, NmcdError> {
    match method {
        Method::Nmcd | Method::NmcdUniform => {
            let mut cfg = opts.nmcd.clone();
            if method == Method::NmcdUniform {
                cfg.weight = WeightVariant::Uniform;
            }
            cfg.known_k = known_k;
            if opts.nmcd_k_bar.is_some() {
                cfg.k_bar = opts.nmcd_k_bar;
            }
            detect(values, &cfg)
        }
        Method::PlMean | Method::PlMeanvar => {
            let crit = if method == Method::PlMean {
                PlCriterion::Mean
            } else {
                PlCriterion::MeanVar
            };
            let cfg = PlConfig {
                known_k,
                k_bar: opts.pl_k_bar,
                zeta: None,
                allow_zero: opts.nmcd.allow_zero,
            };
            pl_detect(values, crit, &cfg)
        }
    }
}

/// Scores of one replication.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepRecord {
    pub rep: u64,
    pub k_true: usize,
    pub k_hat: usize,
    /// `xi(estimate, truth)`; absent when nothing was detected.
    pub xi_est_truth: Option<f64>,
    /// `xi(truth, estimate)`.
    pub xi_truth_est: Option<f64>,
    pub rand: f64,
    pub runtime_ms: f64,
    /// Screened candidate count, when screening ran.
    pub candidates: Option<usize>,
    /// Every true change-point has a screened candidate within `ceil(ln n)`.
    pub covered: Option<bool>,
}

impl RepRecord {
    pub fn abs_k_error(&self) -> f64 {
        self.k_hat.abs_diff(self.k_true) as f64
    }

    pub fn xi_sum(&self) -> Option<f64> {
        Some(self.xi_est_truth? + self.xi_truth_est?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub spec: SimSpec,
    pub reps: u64,
    pub methods: Vec<Method>,
    pub options: MethodOptions,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodRun {
    pub method: Method,
    pub records: Vec<RepRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stat {
    pub mean: f64,
    /// Sample standard deviation; absent with fewer than two values.
    pub sd: Option<f64>,
    pub count: usize,
}

impl Stat {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Option<Self> {
        let v: Vec<f64> = values.into_iter().collect();
        if v.is_empty() {
            return None;
        }
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let sd = (v.len() > 1).then(|| {
            let ss: f64 = v.iter().map(|x| (x - mean) * (x - mean)).sum();
            (ss / (n - 1.0)).sqrt()
        });
        Some(Self {
            mean,
            sd,
            count: v.len(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub method: &'static str,
    pub reps: usize,
    pub xi_est_truth: Option<Stat>,
    pub xi_truth_est: Option<Stat>,
    pub xi_sum: Option<Stat>,
    pub abs_k_error: Option<Stat>,
    pub rand: Option<Stat>,
    pub runtime_ms: Option<Stat>,
    /// Replications with no detected change-point (distances missing).
    pub missing_xi: usize,
}

impl MethodRun {
    pub fn summary(&self) -> Summary {
        let r = &self.records;
        Summary {
            method: self.method.name(),
            reps: r.len(),
            xi_est_truth: Stat::of(r.iter().filter_map(|x| x.xi_est_truth)),
            xi_truth_est: Stat::of(r.iter().filter_map(|x| x.xi_truth_est)),
            xi_sum: Stat::of(r.iter().filter_map(RepRecord::xi_sum)),
            abs_k_error: Stat::of(r.iter().map(RepRecord::abs_k_error)),
            rand: Stat::of(r.iter().map(|x| x.rand)),
            runtime_ms: Stat::of(r.iter().map(|x| x.runtime_ms)),
            missing_xi: r.iter().filter(|x| x.xi_est_truth.is_none()).count(),
        }
    }

    pub fn mean_of(&self, f: impl Fn(&RepRecord) -> Option<f64>) -> f64 {
        Stat::of(self.records.iter().filter_map(f)).map_or(f64::NAN, |s| s.mean)
    }
}

fn score(
    rep: u64,
    truth: &nmcd_core::Segmentation,
    res: &DetectionResult,
    runtime_ms: f64,
) -> RepRecord {
    let est = res.segmentation.change_points();
    let tru = truth.change_points();
    let dist = |a: &[usize], b: &[usize]| xi(a, b).ok().map(|d| d as f64);
    let (candidates, covered) = match &res.candidates {
        Some(c) => {
            let radius = (truth.n() as f64).ln().ceil() as usize;
            let cps = c.change_points();
            let covered = tru
                .iter()
                .all(|&t| cps.iter().any(|&c| c.abs_diff(t) <= radius));
            (Some(c.len()), Some(covered))
        }
        None => (None, None),
    };
    RepRecord {
        rep,
        k_true: truth.k(),
        k_hat: res.k_hat,
        xi_est_truth: dist(est, tru),
        xi_truth_est: dist(tru, est),
        rand: rand_index(&res.segmentation, truth).expect("same length"),
        runtime_ms,
        candidates,
        covered,
    }
}

/// Runs every replication for every method. Output order follows `methods`
/// and then the replication index.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<MethodRun>, NmcdError> {
    cfg.spec.validate()?;
    let per_rep: Vec<Vec<RepRecord>> = (0..cfg.reps)
        .into_par_iter()
        .map(|r| {
            let (values, truth) = generate(&cfg.spec.replication(r))?;
            let known = cfg.options.known_k.then(|| truth.k());
            cfg.methods
                .iter()
                .map(|&m| {
                    let t0 = Instant::now();
                    let res = run_method(m, &values, known, &cfg.options)?;
                    let ms = t0.elapsed().as_secs_f64() * 1e3;
                    Ok(score(r, &truth, &res, ms))
                })
                .collect()
        })
        .collect::<Result<_, NmcdError>>()?;

    Ok(cfg
        .methods
        .iter()
        .enumerate()
        .map(|(i, &method)| MethodRun {
            method,
            records: per_rep.iter().map(|row| row[i].clone()).collect(),
        })
        .collect())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

/// Metrics table, one row per method.
pub fn write_summary_csv<W: std::io::Write>(
    runs: &[MethodRun],
    out: W,
) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "schema_version",
        "method",
        "reps",
        "xi_est_truth_mean",
        "xi_est_truth_sd",
        "xi_truth_est_mean",
        "xi_truth_est_sd",
        "xi_sum_mean",
        "xi_sum_sd",
        "abs_k_error_mean",
        "abs_k_error_sd",
        "rand_mean",
        "rand_sd",
        "runtime_ms_mean",
        "missing_xi",
    ])?;
    for run in runs {
        let s = run.summary();
        let mean = |x: Option<Stat>| fmt_opt(x.map(|s| s.mean));
        let sd = |x: Option<Stat>| fmt_opt(x.and_then(|s| s.sd));
        w.write_record([
            crate::SCHEMA_VERSION.to_string(),
            s.method.to_string(),
            s.reps.to_string(),
            mean(s.xi_est_truth),
            sd(s.xi_est_truth),
            mean(s.xi_truth_est),
            sd(s.xi_truth_est),
            mean(s.xi_sum),
            sd(s.xi_sum),
            mean(s.abs_k_error),
            sd(s.abs_k_error),
            mean(s.rand),
            sd(s.rand),
            mean(s.runtime_ms),
            s.missing_xi.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use nmcd_core::simgen::{ErrorDist, Model};

    #[test]
    fn stat_degenerate_cases() {
        assert!(Stat::of(Vec::<f64>::new()).is_none());
        let s = Stat::of([2.0]).unwrap();
        assert_eq!(s.mean, 2.0);
        assert!(s.sd.is_none());
        let s = Stat::of([1.0, 3.0]).unwrap();
        assert_eq!(s.sd, Some(2f64.sqrt()));
    }

    #[test]
    fn method_names_round_trip() {
        for m in [Method::Nmcd, Method::NmcdUniform, Method::PlMean, Method::PlMeanvar] {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("ecp".parse::<Method>().is_err());
    }

    #[test]
    fn rows_follow_replication_order() {
        let cfg = BenchConfig {
            spec: SimSpec::new(Model::Blocks, 200, 0.3, ErrorDist::Normal, 9),
            reps: 6,
            methods: vec![Method::Nmcd, Method::PlMean],
            options: MethodOptions::default(),
        };
        let a = run_bench(&cfg).unwrap();
        let b = run_bench(&cfg).unwrap();
        for (ra, rb) in a.iter().zip(&b) {
            let reps: Vec<u64> = ra.records.iter().map(|r| r.rep).collect();
            assert_eq!(reps, (0..6).collect::<Vec<_>>());
            let ka: Vec<usize> = ra.records.iter().map(|r| r.k_hat).collect();
            let kb: Vec<usize> = rb.records.iter().map(|r| r.k_hat).collect();
            assert_eq!(ka, kb);
        }
    }
}

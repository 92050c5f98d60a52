// SPDX-License-Identifier: MIT OR Apache-2.0

//! Output schemas. All change-point indices are 1-based and name the first
//! observation of the new segment.

use nmcd_core::simgen::{ErrorDist, Model, SimSpec};
use nmcd_core::{DetectionResult, Segmentation, WeightVariant};
use serde::Serialize;

use crate::SCHEMA_VERSION;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BicRow {
    #[serde(rename = "L")]
    pub l: usize,
    pub max_loglik: f64,
    pub bic: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub method: String,
    pub weight: Option<&'static str>,
    pub correction: Option<bool>,
    pub screening: bool,
    pub window: Option<usize>,
    pub zeta: Option<f64>,
    pub zeta_exponent: Option<f64>,
    pub k_bar: Option<usize>,
    pub known_k: Option<usize>,
    pub allow_zero: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectReport {
    pub schema_version: u32,
    pub n: usize,
    pub k_hat: usize,
    pub change_points: Vec<usize>,
    pub loglik: f64,
    pub bic: Vec<BicRow>,
    pub candidates: Option<Vec<usize>>,
    pub config_echo: ConfigEcho,
    pub warnings: Vec<String>,
    pub runtime_ms: f64,
}

pub fn weight_name(w: WeightVariant) -> &'static str {
    match w {
        WeightVariant::Zhang => "zhang",
        WeightVariant::Uniform => "uniform",
    }
}

impl DetectReport {
    pub fn new(n: usize, res: &DetectionResult, config_echo: ConfigEcho, runtime_ms: f64) -> Self {
        let bic = res
            .bic
            .as_ref()
            .map(|t| {
                t.entries
                    .iter()
                    .map(|e| BicRow {
                        l: e.l,
                        max_loglik: e.max_loglik,
                        bic: e.bic,
                    })
                    .collect()
            })
            .unwrap_or_default();
        let warnings = res
            .warnings
            .iter()
            .map(|w| match w {
                nmcd_core::pipeline::Warning::EmptyScreen => {
                    "screening kept no candidate; used the full grid".to_string()
                }
                nmcd_core::pipeline::Warning::KBarCapped { requested, used } => {
                    format!("max-k {requested} exceeds the grid; lowered to {used}")
                }
            })
            .collect();
        Self {
            schema_version: SCHEMA_VERSION,
            n,
            k_hat: res.k_hat,
            change_points: res.segmentation.change_points().to_vec(),
            loglik: res.loglik,
            bic,
            candidates: res.candidates.as_ref().map(|c| c.change_points()),
            config_echo,
            warnings,
            runtime_ms,
        }
    }
}

/// Per-observation segment ids and means, for plotting.
pub fn write_segments_csv<W: std::io::Write>(
    values: &[f64],
    seg: &Segmentation,
    out: W,
) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["schema_version", "index", "value", "segment", "segment_mean"])?;
    for (id, (s, e)) in seg.segments().enumerate() {
        let part = &values[s - 1..e - 1];
        let mean = part.iter().sum::<f64>() / part.len() as f64;
        for (k, v) in part.iter().enumerate() {
            w.write_record([
                SCHEMA_VERSION.to_string(),
                (s + k).to_string(),
                v.to_string(),
                id.to_string(),
                mean.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn model_name(m: Model) -> &'static str {
    match m {
        Model::Blocks => "blocks1",
        Model::MeanScale => "meanscale2",
        Model::Shape => "shape3",
        Model::DivergingMean => "diverging1",
        Model::DivergingScale => "diverging2",
    }
}

pub fn error_name(e: ErrorDist) -> &'static str {
    match e {
        ErrorDist::Normal => "normal",
        ErrorDist::T3 => "t3",
        ErrorDist::ChiSq1 => "chisq1",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpecEcho {
    pub model: &'static str,
    pub n: usize,
    pub sigma: f64,
    pub error: &'static str,
    pub seed: u64,
}

/// Sidecar written next to simulated data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimSidecar {
    pub schema_version: u32,
    pub spec: SpecEcho,
    pub k: usize,
    pub truth: Vec<usize>,
}

impl SimSidecar {
    pub fn new(spec: &SimSpec, truth: &Segmentation) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            spec: SpecEcho {
                model: model_name(spec.model),
                n: spec.n,
                sigma: spec.sigma,
                error: error_name(spec.error),
                seed: spec.seed,
            },
            k: truth.k(),
            truth: truth.change_points().to_vec(),
        }
    }
}

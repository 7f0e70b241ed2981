//! Deterministic synthetic datasets and JSONL ingestion.
//!
//! Generation is bit-reproducible: all draws come from the ChaCha8 stream
//! keyed by the spec's seed (see [`crate::rng`]), in a fixed order
//! (samples first, train before validation, then corruption picks).
//! Corruption is exact: `round(noise_rate * n_train)` training samples are
//! flipped (classification) or displaced (regression) and flagged
//! `is_corrupted`; validation data is never corrupted.

use crate::error::{Error, Result};
use crate::models::LabeledSample;
use crate::rng::{self, STREAM_DATA};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, BufReader};
use std::path::Path;

/// Task family plus its one shape parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "snake_case")]
pub enum TaskSpec {
    /// Binary classification: class c has mean `(-1)^c * (s/2) * e1` and
    /// identity covariance; corruption flips the label.
    TwoGaussianClassification { class_separation: f64 },
    /// Targets `w* . x + N(0, noise_sigma^2)` with standard normal
    /// features and seeded true weights; corruption displaces the target
    /// by +-10 * noise_sigma.
    LinearRegression { noise_sigma: f64 },
}

/// Full description of a synthetic dataset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DatasetSpec {
    #[serde(flatten)]
    pub task: TaskSpec,
    pub n_train: usize,
    pub n_val: usize,
    pub dim: usize,
    /// Label-flip probability (classification) or outlier-injection rate
    /// (regression); in [0, 1).
    pub noise_rate: f64,
    pub seed: u64,
}

impl DatasetSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_train == 0 {
            return Err(Error::config("n_train must be positive"));
        }
        if self.n_val == 0 {
            return Err(Error::config("n_val must be positive"));
        }
        if self.dim == 0 {
            return Err(Error::config("dim must be positive"));
        }
        if !self.noise_rate.is_finite() || !(0.0..1.0).contains(&self.noise_rate) {
            return Err(Error::config(format!(
                "noise_rate must be in [0, 1), got {}",
                self.noise_rate
            )));
        }
        match self.task {
            TaskSpec::TwoGaussianClassification { class_separation } => {
                if !class_separation.is_finite() || class_separation <= 0.0 {
                    return Err(Error::config(format!(
                        "class_separation must be > 0, got {class_separation}"
                    )));
                }
            }
            TaskSpec::LinearRegression { noise_sigma } => {
                if !noise_sigma.is_finite() || noise_sigma <= 0.0 {
                    return Err(Error::config(format!(
                        "noise_sigma must be > 0, got {noise_sigma}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Generates `(train, val)` for a spec; identical specs yield identical
/// datasets.
pub fn generate(spec: &DatasetSpec) -> Result<(Vec<LabeledSample>, Vec<LabeledSample>)> {
    spec.validate()?;
    let mut rng = rng::seeded(spec.seed, STREAM_DATA);
    let total = spec.n_train + spec.n_val;

    let mut samples = Vec::with_capacity(total);
    match spec.task {
        TaskSpec::TwoGaussianClassification { class_separation } => {
            for _ in 0..total {
                let class = rng::index_below(&mut rng, 2);
                let shift = if class == 0 { -0.5 } else { 0.5 } * class_separation;
                let features: Vec<f64> = (0..spec.dim)
                    .map(|d| {
                        let noise = rng::standard_normal(&mut rng);
                        if d == 0 {
                            noise + shift
                        } else {
                            noise
                        }
                    })
                    .collect();
                samples.push(LabeledSample {
                    features,
                    label: class as f64,
                    is_corrupted: false,
                });
            }
        }
        TaskSpec::LinearRegression { noise_sigma } => {
            let true_weights: Vec<f64> = (0..spec.dim)
                .map(|_| rng::standard_normal(&mut rng))
                .collect();
            for _ in 0..total {
                let features: Vec<f64> = (0..spec.dim)
                    .map(|_| rng::standard_normal(&mut rng))
                    .collect();
                let clean: f64 = true_weights.iter().zip(&features).map(|(w, x)| w * x).sum();
                let label = clean + noise_sigma * rng::standard_normal(&mut rng);
                samples.push(LabeledSample {
                    features,
                    label,
                    is_corrupted: false,
                });
            }
        }
    }

    let mut val = samples.split_off(spec.n_train);
    let mut train = samples;
    debug_assert_eq!(val.len(), spec.n_val);

    corrupt(&mut train, spec, &mut rng);
    // Validation stays clean by contract.
    for sample in &mut val {
        sample.is_corrupted = false;
    }
    Ok((train, val))
}

fn corrupt(train: &mut [LabeledSample], spec: &DatasetSpec, rng: &mut ChaCha8Rng) {
    let k = (spec.noise_rate * spec.n_train as f64).round() as usize;
    let mut indices: Vec<usize> = (0..train.len()).collect();
    rng::shuffle(rng, &mut indices);
    for &i in indices.iter().take(k) {
        let sample = &mut train[i];
        match spec.task {
            TaskSpec::TwoGaussianClassification { .. } => {
                sample.label = 1.0 - sample.label;
            }
            TaskSpec::LinearRegression { noise_sigma } => {
                let sign = if rng::index_below(rng, 2) == 0 {
                    -1.0
                } else {
                    1.0
                };
                sample.label += sign * 10.0 * noise_sigma;
            }
        }
        sample.is_corrupted = true;
    }
}

/// Serializes samples to the JSONL wire format, one object per line,
/// trailing newline included.
pub fn samples_to_jsonl(samples: &[LabeledSample]) -> String {
    let mut out = String::new();
    for sample in samples {
        out.push_str(&serde_json::to_string(sample).expect("sample serialization cannot fail"));
        out.push('\n');
    }
    out
}

/// Loads samples from a JSONL file.
///
/// Every line must be an object with `features` (number array), `label`
/// (number) and optional `is_corrupted` (bool, default false). Parse and
/// dimension errors name the offending 1-based line.
pub fn load_jsonl(path: impl AsRef<Path>) -> Result<Vec<LabeledSample>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)?;
    let reader = BufReader::new(file);
    let mut samples: Vec<LabeledSample> = Vec::new();
    let mut expected_dim: Option<usize> = None;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let sample: LabeledSample = serde_json::from_str(&line).map_err(|e| Error::Jsonl {
            path: path.display().to_string(),
            line: line_no,
            message: e.to_string(),
        })?;
        match expected_dim {
            None => expected_dim = Some(sample.features.len()),
            Some(dim) if dim != sample.features.len() => {
                return Err(Error::Jsonl {
                    path: path.display().to_string(),
                    line: line_no,
                    message: format!(
                        "inconsistent feature dimension: expected {dim}, got {}",
                        sample.features.len()
                    ),
                })
            }
            _ => {}
        }
        samples.push(sample);
    }
    Ok(samples)
}

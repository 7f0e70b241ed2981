//! Running estimate of the mean task loss.

use crate::error::{Error, Result};
use crate::superloss::TauMode;
use serde::{Deserialize, Serialize};

/// Tracks `tau`, the loss average the confidence weighting pivots on.
///
/// Static mode never moves; BatchMean forgets everything but the latest
/// batch; RunningEma initializes to the first batch mean and then follows
/// `estimate <- m * estimate + (1 - m) * batch_mean`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauTracker {
    mode: TauMode,
    estimate: f64,
    initialized: bool,
    observation_count: u64,
}

impl TauTracker {
    pub fn new(mode: TauMode) -> Result<Self> {
        match mode {
            TauMode::Static { value } if !value.is_finite() => Err(Error::NonFinite {
                name: "static tau",
                value,
            }),
            TauMode::RunningEma { momentum } if !(momentum > 0.0 && momentum < 1.0) => {
                Err(Error::InvalidMomentum(momentum))
            }
            _ => Ok(TauTracker {
                mode,
                estimate: match mode {
                    TauMode::Static { value } => value,
                    _ => 0.0,
                },
                initialized: matches!(mode, TauMode::Static { .. }),
                observation_count: 0,
            }),
        }
    }

    /// Folds one batch of raw task losses in and returns the new tau.
    pub fn update(&mut self, batch_losses: &[f64]) -> Result<f64> {
        if batch_losses.is_empty() {
            return Err(Error::EmptyBatch);
        }
        for &loss in batch_losses {
            if !loss.is_finite() {
                return Err(Error::NonFinite {
                    name: "batch loss",
                    value: loss,
                });
            }
        }
        let mean = batch_losses.iter().sum::<f64>() / batch_losses.len() as f64;
        self.observation_count += 1;
        match self.mode {
            TauMode::Static { value } => Ok(value),
            TauMode::BatchMean => {
                self.estimate = mean;
                self.initialized = true;
                Ok(mean)
            }
            TauMode::RunningEma { momentum } => {
                self.estimate = if self.initialized {
                    momentum * self.estimate + (1.0 - momentum) * mean
                } else {
                    mean
                };
                self.initialized = true;
                Ok(self.estimate)
            }
        }
    }

    /// Current estimate, if any batch has been observed (Static is always
    /// defined).
    pub fn current(&self) -> Option<f64> {
        self.initialized.then_some(self.estimate)
    }

    pub fn observation_count(&self) -> u64 {
        self.observation_count
    }

    pub fn mode(&self) -> TauMode {
        self.mode
    }
}

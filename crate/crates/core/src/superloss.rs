//! Closed-form confidence weighting (SuperLoss).
//!
//! For a per-sample task loss `l`, a loss average `tau`, and a
//! regularization strength `lambda`, the wrapper loss
//!
//! ```text
//! L(l, sigma) = (l - tau) * sigma + lambda * ln(sigma)^2
//! ```
//!
//! has the minimizing confidence
//!
//! ```text
//! sigma* = exp(-W0(0.5 * max(-2/e, beta))),   beta = (l - tau) / lambda
//! ```
//!
//! with `sigma*` in `(0, e]`: samples easier than the average (`l < tau`)
//! are upweighted, harder ones downweighted, and the clamp caps the
//! upweight at `e`. `sigma*` doubles as the gradient weight: treating it
//! as a constant, `d SL / d l = sigma*` (envelope theorem), so scaling a
//! sample's gradient by `sigma*` is exactly gradient descent on the
//! minimized wrapper loss.

use crate::error::{Error, Result};
use crate::lambert_w::lambert_w0;
use serde::{Deserialize, Serialize};

/// -2/e, the clamp threshold on beta.
pub const BETA_CLAMP: f64 = -2.0 / std::f64::consts::E;

/// How the loss average `tau` is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TauMode {
    /// Fixed value, never updated.
    Static { value: f64 },
    /// Exponential moving average of batch means; the first observation
    /// initializes the estimate to the batch mean.
    RunningEma { momentum: f64 },
    /// The current batch's mean, with no memory.
    BatchMean,
}

/// Configuration of the confidence weighting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperLossConfig {
    /// Regularization strength lambda (> 0). At 1.0, beta is simply
    /// `l - tau`.
    pub lambda: f64,
    pub tau_mode: TauMode,
}

impl Default for SuperLossConfig {
    fn default() -> Self {
        SuperLossConfig {
            lambda: 1.0,
            tau_mode: TauMode::RunningEma { momentum: 0.9 },
        }
    }
}

impl SuperLossConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.lambda.is_finite() || self.lambda <= 0.0 {
            return Err(Error::NonPositiveLambda(self.lambda));
        }
        if let TauMode::RunningEma { momentum } = self.tau_mode {
            if !(momentum > 0.0 && momentum < 1.0) {
                return Err(Error::InvalidMomentum(momentum));
            }
        }
        if let TauMode::Static { value } = self.tau_mode {
            if !value.is_finite() {
                return Err(Error::NonFinite {
                    name: "static tau",
                    value,
                });
            }
        }
        Ok(())
    }
}

/// Everything the closed form yields for one sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperLossOutput {
    /// Minimized wrapper loss `(l - tau) * sigma* + lambda * ln(sigma*)^2`.
    pub value: f64,
    /// Minimizing confidence, in `(0, e]`.
    pub sigma_star: f64,
    /// Gradient weight; equal to `sigma_star`.
    pub weight: f64,
    /// Normalized loss deviation `(l - tau) / lambda`.
    pub beta: f64,
    /// Whether `max(-2/e, beta)` was active.
    pub clamped: bool,
}

fn check_inputs(loss: f64, tau: f64, lambda: f64) -> Result<()> {
    if !loss.is_finite() {
        return Err(Error::NonFinite {
            name: "loss",
            value: loss,
        });
    }
    if !tau.is_finite() {
        return Err(Error::NonFinite {
            name: "tau",
            value: tau,
        });
    }
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::NonPositiveLambda(lambda));
    }
    Ok(())
}

/// Full per-sample evaluation: confidence, weight, minimized value, beta.
pub fn evaluate(loss: f64, tau: f64, lambda: f64) -> Result<SuperLossOutput> {
    check_inputs(loss, tau, lambda)?;
    let beta = (loss - tau) / lambda;
    let clamped = beta < BETA_CLAMP;
    let z = 0.5 * beta.max(BETA_CLAMP);
    let sigma = (-lambert_w0(z)?).exp();
    let log_sigma = sigma.ln();
    let value = (loss - tau) * sigma + lambda * log_sigma * log_sigma;
    Ok(SuperLossOutput {
        value,
        sigma_star: sigma,
        weight: sigma,
        beta,
        clamped,
    })
}

/// Minimizing confidence `sigma*` in `(0, e]`.
///
/// Equals 1 when `loss == tau` and saturates at `e` for
/// `beta <= -2/e`.
pub fn sigma_star(loss: f64, tau: f64, lambda: f64) -> Result<f64> {
    evaluate(loss, tau, lambda).map(|out| out.sigma_star)
}

/// Minimized wrapper loss at `sigma*`.
///
/// Zero when `loss == tau`, and never above `loss - tau` (sigma = 1 is
/// feasible).
pub fn superloss_value(loss: f64, tau: f64, lambda: f64) -> Result<f64> {
    evaluate(loss, tau, lambda).map(|out| out.value)
}

/// Gradient weight for one sample; numerically equal to the derivative of
/// [`superloss_value`] with respect to `loss`.
pub fn loss_weight(loss: f64, tau: f64, lambda: f64) -> Result<f64> {
    sigma_star(loss, tau, lambda)
}

/// Element-wise [`evaluate`] over a batch sharing one `tau`.
pub fn batch_superloss(
    losses: &[f64],
    tau: f64,
    config: &SuperLossConfig,
) -> Result<Vec<SuperLossOutput>> {
    config.validate()?;
    if losses.is_empty() {
        return Err(Error::EmptyBatch);
    }
    losses
        .iter()
        .map(|&loss| evaluate(loss, tau, config.lambda))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::E;

    /// Independent oracle: grid search over sigma in (0, e] with two
    /// refinement passes (final resolution ~1e-7). On (0, e] the wrapper
    /// loss has a unique minimum, which is what the closed form computes.
    pub(crate) fn brute_force_sigma(loss: f64, tau: f64, lambda: f64) -> f64 {
        let objective = |sigma: f64| (loss - tau) * sigma + lambda * sigma.ln().powi(2);
        let mut step = 1e-3;
        let mut best = E;
        let mut best_val = objective(E);
        let mut lo = step;
        let mut hi = E;
        for pass in 0..3 {
            let n = ((hi - lo) / step).round() as usize;
            for i in 0..=n {
                let sigma = (lo + i as f64 * step).min(E);
                let val = objective(sigma);
                if val < best_val {
                    best_val = val;
                    best = sigma;
                }
            }
            if pass < 2 {
                lo = (best - step).max(step / 100.0);
                hi = (best + step).min(E);
                step /= 100.0;
            }
        }
        best
    }

    #[test]
    fn clamp_halving_is_exact() {
        // The clamp hands 0.5 * (-2/e) to W0; that must be bitwise -1/e so
        // the saturated confidence is exactly e.
        assert_eq!(0.5 * BETA_CLAMP, crate::lambert_w::NEG_INV_E);
    }

    #[test]
    fn neutral_at_tau() {
        assert_eq!(sigma_star(1.0, 1.0, 1.0).unwrap(), 1.0);
        assert_eq!(superloss_value(1.0, 1.0, 1.0).unwrap(), 0.0);
        assert_eq!(loss_weight(3.25, 3.25, 0.7).unwrap(), 1.0);
    }

    #[test]
    fn clamped_region_saturates_at_e() {
        // beta = -1 < -2/e.
        let out = evaluate(0.0, 1.0, 1.0).unwrap();
        assert_eq!(out.sigma_star, E);
        assert!(out.clamped);
        assert_relative_eq!(out.value, 1.0 - E, max_relative = 1e-14);
    }

    #[test]
    fn derived_point_matches_brute_force() {
        // (loss=2, tau=1, lambda=1): beta = 1, W(0.5) = 0.3517337112.
        let brute = brute_force_sigma(2.0, 1.0, 1.0);
        let sigma = sigma_star(2.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(sigma, brute, epsilon = 1e-6);
        assert_relative_eq!(sigma, 0.7034674225, epsilon = 1e-9);
        assert_relative_eq!(
            superloss_value(2.0, 1.0, 1.0).unwrap(),
            0.8271840261,
            epsilon = 1e-9
        );
    }

    #[test]
    fn value_never_beats_feasible_sigmas() {
        // Optimality at every grid point: loss, tau in [0, 5] step 0.1,
        // lambda in {0.1, 0.25, 1, 4}, probing sigma in {0.5, 1, 2, e}.
        for lambda in [0.1, 0.25, 1.0, 4.0] {
            for i in 0..=50 {
                for j in 0..=50 {
                    let (loss, tau) = (i as f64 * 0.1, j as f64 * 0.1);
                    let value = superloss_value(loss, tau, lambda).unwrap();
                    for sigma in [0.5, 1.0, 2.0, E] {
                        let candidate = (loss - tau) * sigma + lambda * sigma.ln().powi(2);
                        assert!(
                            value <= candidate + 1e-12,
                            "loss={loss} tau={tau} lambda={lambda}: value {value} beats sigma={sigma} ({candidate})"
                        );
                    }
                    // sigma = 1 is always feasible.
                    assert!(value <= loss - tau + 1e-12);
                }
            }
        }
    }

    #[test]
    fn weight_matches_finite_difference_of_value() {
        let h = 1e-5;
        for &(loss, tau, lambda) in &[
            (2.0, 1.0, 1.0),
            (1.5, 1.0, 0.25),
            // One point on each side of the clamp at beta = -2/e.
            (0.2, 1.0, 1.0),
            (0.35, 1.0, 1.0),
        ] {
            let fd = (superloss_value(loss + h, tau, lambda).unwrap()
                - superloss_value(loss - h, tau, lambda).unwrap())
                / (2.0 * h);
            let weight = loss_weight(loss, tau, lambda).unwrap();
            assert!(
                (fd - weight).abs() <= 1e-5 * weight.max(1.0),
                "loss={loss}: fd={fd} weight={weight}"
            );
        }
    }

    #[test]
    fn monotone_in_loss() {
        let mut prev = f64::INFINITY;
        for i in 0..=100 {
            let loss = i as f64 * 0.05;
            let sigma = sigma_star(loss, 2.5, 0.5).unwrap();
            assert!(sigma <= prev + 1e-15);
            assert!(sigma > 0.0 && sigma <= E + 1e-9);
            prev = sigma;
        }
    }

    #[test]
    fn scale_covariance_on_grid() {
        // beta is invariant under joint rescaling of (loss, tau, lambda).
        for c in [2.0, 10.0] {
            for i in 0..=50 {
                for j in 0..=50 {
                    let (loss, tau) = (i as f64 * 0.1, j as f64 * 0.1);
                    let a = sigma_star(loss, tau, 1.0).unwrap();
                    let b = sigma_star(loss / c, tau / c, 1.0 / c).unwrap();
                    assert!((a - b).abs() <= 1e-10, "loss={loss} tau={tau} c={c}");
                }
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            sigma_star(1.0, 1.0, 0.0).unwrap_err(),
            Error::NonPositiveLambda(_)
        ));
        assert!(matches!(
            sigma_star(f64::INFINITY, 1.0, 1.0).unwrap_err(),
            Error::NonFinite { .. }
        ));
        assert!(matches!(
            sigma_star(1.0, f64::NAN, 1.0).unwrap_err(),
            Error::NonFinite { .. }
        ));
    }

    #[test]
    fn negative_losses_are_accepted() {
        let out = evaluate(-3.0, 0.0, 1.0).unwrap();
        assert!(out.clamped);
        assert_eq!(out.sigma_star, E);
    }

    #[test]
    fn batch_matches_scalar_calls() {
        let config = SuperLossConfig {
            lambda: 0.25,
            tau_mode: TauMode::BatchMean,
        };
        let losses = [0.2, 0.9, 3.0];
        let outs = batch_superloss(&losses, 1.0, &config).unwrap();
        assert_eq!(outs.len(), 3);
        for (loss, out) in losses.iter().zip(&outs) {
            let scalar = evaluate(*loss, 1.0, 0.25).unwrap();
            assert_eq!(out, &scalar);
        }
    }

    #[test]
    fn batch_sides_of_one() {
        let config = SuperLossConfig::default();
        let outs = batch_superloss(&[0.5, 1.5], 1.0, &config).unwrap();
        assert!(outs[0].sigma_star > 1.0);
        assert!(outs[1].sigma_star < 1.0);

        let equal = batch_superloss(&[1.0, 1.0], 1.0, &config).unwrap();
        assert!(equal.iter().all(|o| o.sigma_star == 1.0 && o.value == 0.0));
    }

    #[test]
    fn empty_batch_is_an_error() {
        let err = batch_superloss(&[], 1.0, &SuperLossConfig::default()).unwrap_err();
        assert!(matches!(err, Error::EmptyBatch));
    }

    #[test]
    fn config_validation() {
        assert!(SuperLossConfig::default().validate().is_ok());
        let bad = SuperLossConfig {
            lambda: -1.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad_momentum = SuperLossConfig {
            lambda: 1.0,
            tau_mode: TauMode::RunningEma { momentum: 1.0 },
        };
        assert!(bad_momentum.validate().is_err());
    }
}

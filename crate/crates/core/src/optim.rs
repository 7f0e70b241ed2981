//! AdamW with decoupled weight decay.

use crate::error::{Error, Result};
use crate::models::ParamVector;
use serde::{Deserialize, Serialize};

/// AdamW hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamWHyper {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub weight_decay: f64,
}

impl AdamWHyper {
    /// The summarization fine-tuning recipe: lr 3e-5, betas (0.9, 0.98),
    /// weight decay 0.01.
    pub fn paper() -> Self {
        AdamWHyper {
            learning_rate: 3e-5,
            beta1: 0.9,
            beta2: 0.98,
            epsilon: 1e-8,
            weight_decay: 0.01,
        }
    }

    /// Same recipe with a learning rate sized for the toy models here
    /// (3e-5 is tuned for large-transformer fine-tuning).
    pub fn toy() -> Self {
        AdamWHyper {
            learning_rate: 1e-2,
            ..AdamWHyper::paper()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.learning_rate.is_finite()
            && self.learning_rate > 0.0
            && (0.0..1.0).contains(&self.beta1)
            && (0.0..1.0).contains(&self.beta2)
            && self.epsilon.is_finite()
            && self.epsilon > 0.0
            && self.weight_decay.is_finite()
            && self.weight_decay >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::config(format!(
                "invalid AdamW hyperparameters: {self:?}"
            )))
        }
    }
}

impl Default for AdamWHyper {
    fn default() -> Self {
        AdamWHyper::toy()
    }
}

/// First/second moment estimates plus the step counter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdamWState {
    first_moment: Vec<f64>,
    second_moment: Vec<f64>,
    step_count: u64,
}

impl AdamWState {
    pub fn new(param_count: usize) -> Self {
        AdamWState {
            first_moment: vec![0.0; param_count],
            second_moment: vec![0.0; param_count],
            step_count: 0,
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }
}

/// One AdamW update, in place.
///
/// `m <- b1 m + (1-b1) g`, `v <- b2 v + (1-b2) g^2`, bias-corrected by
/// `1 - b^t`, then `p <- p - lr * m_hat / (sqrt(v_hat) + eps) - lr * wd * p`
/// with the decoupled decay applied to the pre-step parameters. Decay
/// covers every parameter, biases included.
pub fn adamw_step(
    params: &mut ParamVector,
    grads: &ParamVector,
    state: &mut AdamWState,
    hyper: &AdamWHyper,
) -> Result<()> {
    hyper.validate()?;
    if grads.values.len() != params.values.len() {
        return Err(Error::dim(
            "adamw_step gradient",
            params.values.len(),
            grads.values.len(),
        ));
    }
    if state.first_moment.len() != params.values.len() {
        return Err(Error::dim(
            "adamw_step state",
            params.values.len(),
            state.first_moment.len(),
        ));
    }
    if let Some(bad) = grads.values.iter().find(|g| !g.is_finite()) {
        return Err(Error::NonFinite {
            name: "gradient entry",
            value: *bad,
        });
    }

    state.step_count += 1;
    let t = state.step_count as i32;
    let correction1 = 1.0 - hyper.beta1.powi(t);
    let correction2 = 1.0 - hyper.beta2.powi(t);

    for i in 0..params.values.len() {
        let g = grads.values[i];
        let m = &mut state.first_moment[i];
        let v = &mut state.second_moment[i];
        *m = hyper.beta1 * *m + (1.0 - hyper.beta1) * g;
        *v = hyper.beta2 * *v + (1.0 - hyper.beta2) * g * g;
        let m_hat = *m / correction1;
        let v_hat = *v / correction2;
        let p = params.values[i];
        params.values[i] = p
            - hyper.learning_rate * m_hat / (v_hat.sqrt() + hyper.epsilon)
            - hyper.learning_rate * hyper.weight_decay * p;
    }
    Ok(())
}

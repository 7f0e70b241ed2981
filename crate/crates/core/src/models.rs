//! Small differentiable models with exact hand-written gradients.
//!
//! Three model kinds cover the convex and non-convex cases a curriculum
//! experiment needs: linear regression, softmax (logistic) classification,
//! and a one-hidden-layer tanh MLP classifier. Gradients are analytic and
//! verified against central finite differences in the test suites.

use crate::error::{Error, Result};
use crate::rng::{self, STREAM_INIT};
use serde::{Deserialize, Serialize};

/// Per-sample loss kind.
///
/// Cross-entropy pairs with the classifiers, MSE with the linear model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossKind {
    CrossEntropy,
    Mse,
}

/// Probabilities below this are clamped before the log in cross-entropy.
/// This bounds the loss and is a deliberate modification of the loss
/// surface at vanishing probabilities.
pub const PROB_FLOOR: f64 = 1e-12;

/// Model architecture and dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelSpec {
    /// Scalar linear regression: `w . x + b`.
    Linear { in_dim: usize },
    /// Softmax classifier: `softmax(W x + b)`.
    Logistic { in_dim: usize, classes: usize },
    /// One hidden tanh layer, softmax output.
    Mlp {
        in_dim: usize,
        hidden: usize,
        classes: usize,
    },
}

/// Flat parameter storage plus the layer-dims chain it belongs to.
///
/// The chain `[d0, d1, ..., dk]` lays parameters out layer by layer,
/// row-major weights first, then biases: layer `i` holds
/// `(d_i + 1) * d_{i+1}` values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamVector {
    pub shape: Vec<usize>,
    pub values: Vec<f64>,
}

/// Parameter count implied by a layer-dims chain.
fn chain_param_count(shape: &[usize]) -> usize {
    shape.windows(2).map(|w| (w[0] + 1) * w[1]).sum()
}

impl ParamVector {
    pub fn new(shape: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        let expected = chain_param_count(&shape);
        if values.len() != expected {
            return Err(Error::dim("ParamVector::new", expected, values.len()));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                name: "parameter",
                value: *bad,
            });
        }
        Ok(ParamVector { shape, values })
    }

    pub fn zeros_like(&self) -> ParamVector {
        ParamVector {
            shape: self.shape.clone(),
            values: vec![0.0; self.values.len()],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Model output: a scalar for regression, a probability vector for
/// classification.
#[derive(Debug, Clone, PartialEq)]
pub enum Prediction {
    Scalar(f64),
    Probabilities(Vec<f64>),
}

/// One training or validation sample.
///
/// `label` is a real target for regression and an integer class index
/// (stored as a float) for classification. `is_corrupted` is the
/// ground-truth noise annotation carried by synthetic data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledSample {
    pub features: Vec<f64>,
    pub label: f64,
    #[serde(default)]
    pub is_corrupted: bool,
}

impl LabeledSample {
    /// Interprets the label as a class index in `0..classes`.
    pub fn class_label(&self, classes: usize) -> Result<usize> {
        if !self.label.is_finite() || self.label.fract() != 0.0 || self.label < 0.0 {
            return Err(Error::config(format!(
                "label {} is not a class index",
                self.label
            )));
        }
        let idx = self.label as usize;
        if idx >= classes {
            return Err(Error::config(format!(
                "class index {idx} out of range for {classes} classes"
            )));
        }
        Ok(idx)
    }
}

fn softmax(logits: &mut [f64]) {
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for l in logits.iter_mut() {
        *l = (*l - max).exp();
        sum += *l;
    }
    for l in logits.iter_mut() {
        *l /= sum;
    }
}

impl ModelSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            ModelSpec::Linear { in_dim } => in_dim >= 1,
            ModelSpec::Logistic { in_dim, classes } => in_dim >= 1 && classes >= 2,
            ModelSpec::Mlp {
                in_dim,
                hidden,
                classes,
            } => in_dim >= 1 && hidden >= 1 && classes >= 2,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::config(format!("degenerate model dims: {self:?}")))
        }
    }

    pub fn in_dim(&self) -> usize {
        match *self {
            ModelSpec::Linear { in_dim }
            | ModelSpec::Logistic { in_dim, .. }
            | ModelSpec::Mlp { in_dim, .. } => in_dim,
        }
    }

    /// Number of output classes, if this is a classifier.
    pub fn classes(&self) -> Option<usize> {
        match *self {
            ModelSpec::Linear { .. } => None,
            ModelSpec::Logistic { classes, .. } | ModelSpec::Mlp { classes, .. } => Some(classes),
        }
    }

    /// Layer-dims chain defining the parameter layout.
    pub fn param_shape(&self) -> Vec<usize> {
        match *self {
            ModelSpec::Linear { in_dim } => vec![in_dim, 1],
            ModelSpec::Logistic { in_dim, classes } => vec![in_dim, classes],
            ModelSpec::Mlp {
                in_dim,
                hidden,
                classes,
            } => vec![in_dim, hidden, classes],
        }
    }

    pub fn param_count(&self) -> usize {
        chain_param_count(&self.param_shape())
    }

    pub fn zero_params(&self) -> ParamVector {
        ParamVector {
            shape: self.param_shape(),
            values: vec![0.0; self.param_count()],
        }
    }

    /// Seeded init: each layer's weights and biases are uniform in
    /// `[-1/sqrt(fan_in), +1/sqrt(fan_in)]`, drawn layer by layer,
    /// row-major weights first.
    pub fn init_params(&self, seed: u64) -> ParamVector {
        let shape = self.param_shape();
        let mut rng = rng::seeded(seed, STREAM_INIT);
        let mut values = Vec::with_capacity(self.param_count());
        for w in shape.windows(2) {
            let (fan_in, fan_out) = (w[0], w[1]);
            let bound = 1.0 / (fan_in as f64).sqrt();
            for _ in 0..(fan_in + 1) * fan_out {
                values.push(rng::uniform_in(&mut rng, -bound, bound));
            }
        }
        ParamVector { shape, values }
    }

    fn check_args(&self, params: &ParamVector, features: &[f64]) -> Result<()> {
        if params.values.len() != self.param_count() {
            return Err(Error::dim(
                "params",
                self.param_count(),
                params.values.len(),
            ));
        }
        if features.len() != self.in_dim() {
            return Err(Error::dim("features", self.in_dim(), features.len()));
        }
        Ok(())
    }

    /// Model output for one feature vector.
    pub fn forward(&self, params: &ParamVector, features: &[f64]) -> Result<Prediction> {
        self.check_args(params, features)?;
        let p = &params.values;
        match *self {
            ModelSpec::Linear { in_dim } => {
                let dot: f64 = p[..in_dim].iter().zip(features).map(|(w, x)| w * x).sum();
                Ok(Prediction::Scalar(dot + p[in_dim]))
            }
            ModelSpec::Logistic { in_dim, classes } => {
                let mut logits = dense(p, 0, features, in_dim, classes);
                softmax(&mut logits);
                Ok(Prediction::Probabilities(logits))
            }
            ModelSpec::Mlp {
                in_dim,
                hidden,
                classes,
            } => {
                let mut h = dense(p, 0, features, in_dim, hidden);
                for v in h.iter_mut() {
                    *v = v.tanh();
                }
                let offset = (in_dim + 1) * hidden;
                let mut logits = dense(p, offset, &h, hidden, classes);
                softmax(&mut logits);
                Ok(Prediction::Probabilities(logits))
            }
        }
    }

    /// Task loss for one sample.
    pub fn loss(
        &self,
        params: &ParamVector,
        sample: &LabeledSample,
        kind: LossKind,
    ) -> Result<f64> {
        let prediction = self.forward(params, &sample.features)?;
        per_sample_loss(&prediction, sample.label, kind)
    }

    /// Task loss together with its exact gradient in parameter space.
    pub fn loss_and_gradient(
        &self,
        params: &ParamVector,
        sample: &LabeledSample,
        kind: LossKind,
    ) -> Result<(f64, ParamVector)> {
        self.check_args(params, &sample.features)?;
        let p = &params.values;
        let x = &sample.features;
        let mut grad = vec![0.0; p.len()];
        let loss = match (*self, kind) {
            (ModelSpec::Linear { in_dim }, LossKind::Mse) => {
                let Prediction::Scalar(pred) = self.forward(params, x)? else {
                    unreachable!()
                };
                let residual = pred - sample.label;
                for j in 0..in_dim {
                    grad[j] = 2.0 * residual * x[j];
                }
                grad[in_dim] = 2.0 * residual;
                residual * residual
            }
            (ModelSpec::Logistic { in_dim, classes }, LossKind::CrossEntropy) => {
                let label = sample.class_label(classes)?;
                let Prediction::Probabilities(probs) = self.forward(params, x)? else {
                    unreachable!()
                };
                fill_dense_grad(&mut grad, 0, &probs, label, x, in_dim);
                -probs[label].max(PROB_FLOOR).ln()
            }
            (
                ModelSpec::Mlp {
                    in_dim,
                    hidden,
                    classes,
                },
                LossKind::CrossEntropy,
            ) => {
                let label = sample.class_label(classes)?;
                let mut h = dense(p, 0, x, in_dim, hidden);
                for v in h.iter_mut() {
                    *v = v.tanh();
                }
                let offset = (in_dim + 1) * hidden;
                let mut probs = dense(p, offset, &h, hidden, classes);
                softmax(&mut probs);

                // Output layer: delta2 = p - onehot(label).
                fill_dense_grad(&mut grad, offset, &probs, label, &h, hidden);
                // Back through tanh: delta1_k = (sum_c W2[c,k] delta2_c) (1 - h_k^2).
                for k in 0..hidden {
                    let mut back = 0.0;
                    for c in 0..classes {
                        let delta2 = probs[c] - if c == label { 1.0 } else { 0.0 };
                        back += p[offset + c * hidden + k] * delta2;
                    }
                    let delta1 = back * (1.0 - h[k] * h[k]);
                    for j in 0..in_dim {
                        grad[k * in_dim + j] = delta1 * x[j];
                    }
                    grad[hidden * in_dim + k] = delta1;
                }
                -probs[label].max(PROB_FLOOR).ln()
            }
            (model, kind) => {
                return Err(Error::config(format!(
                    "loss kind {kind:?} does not pair with model {model:?}"
                )))
            }
        };
        Ok((
            loss,
            ParamVector {
                shape: params.shape.clone(),
                values: grad,
            },
        ))
    }
}

/// `W input + b` for a layer stored at `offset` (row-major W, then b).
fn dense(p: &[f64], offset: usize, input: &[f64], fan_in: usize, fan_out: usize) -> Vec<f64> {
    let bias_at = offset + fan_out * fan_in;
    (0..fan_out)
        .map(|c| {
            let row = &p[offset + c * fan_in..offset + (c + 1) * fan_in];
            row.iter().zip(input).map(|(w, x)| w * x).sum::<f64>() + p[bias_at + c]
        })
        .collect()
}

/// Gradient of cross-entropy through softmax for one dense layer:
/// `dW[c,j] = (p_c - onehot_c) input_j`, `db_c = p_c - onehot_c`.
fn fill_dense_grad(
    grad: &mut [f64],
    offset: usize,
    probs: &[f64],
    label: usize,
    input: &[f64],
    fan_in: usize,
) {
    let fan_out = probs.len();
    let bias_at = offset + fan_out * fan_in;
    for c in 0..fan_out {
        let delta = probs[c] - if c == label { 1.0 } else { 0.0 };
        for j in 0..fan_in {
            grad[offset + c * fan_in + j] = delta * input[j];
        }
        grad[bias_at + c] = delta;
    }
}

/// Loss of a prediction against a label.
///
/// Cross-entropy wants a probability vector and a class label; MSE wants a
/// scalar prediction and a real target. Any other pairing is an error.
pub fn per_sample_loss(prediction: &Prediction, label: f64, kind: LossKind) -> Result<f64> {
    match (prediction, kind) {
        (Prediction::Probabilities(probs), LossKind::CrossEntropy) => {
            let sample = LabeledSample {
                features: Vec::new(),
                label,
                is_corrupted: false,
            };
            let idx = sample.class_label(probs.len())?;
            Ok(-probs[idx].max(PROB_FLOOR).ln())
        }
        (Prediction::Scalar(pred), LossKind::Mse) => {
            let diff = pred - label;
            Ok(diff * diff)
        }
        (pred, kind) => Err(Error::config(format!(
            "prediction {pred:?} does not pair with loss kind {kind:?}"
        ))),
    }
}

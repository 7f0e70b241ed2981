//! Confidence-aware curriculum training at desk scale.
//!
//! The centerpiece is a confidence-weighted wrapper loss: for a per-sample
//! task loss `l` and a running average `tau`, the wrapper
//! `L(l, sigma) = (l - tau) * sigma + lambda * ln(sigma)^2` admits a
//! closed-form minimizing confidence
//! `sigma* = exp(-W0(0.5 * max(-2/e, (l - tau) / lambda)))`, where `W0` is
//! the principal branch of the Lambert W function. Easy samples (loss below
//! the average) get weights above 1, hard ones below 1, which turns any
//! per-sample loss into a curriculum.
//!
//! Around that primitive the crate provides everything needed to run
//! controlled curriculum-vs-baseline experiments without any external ML
//! framework: small models with hand-written exact gradients, AdamW,
//! deterministic synthetic datasets with ground-truth noise labels, a
//! training loop with interval evaluation and best-checkpoint selection,
//! and ROUGE-1/2/L scoring with a greedy extractive oracle.
//!
//! Everything is deterministic: random streams are ChaCha8 keyed by
//! `(seed, stream)`, and identical configs produce bit-identical logs.

pub mod data;
pub mod error;
pub mod lambert_w;
pub mod metrics;
pub mod models;
pub mod optim;
pub mod rng;
pub mod superloss;
pub mod tau;
pub mod trainer;

pub use error::{Error, Result};

//! `currloss train`

use crate::errors::{Classify, CliError, CliResult};
use crate::manifest::ManifestBuilder;
use clap::Args;
use currloss_core::data;
use currloss_core::trainer::{self, TrainConfig};
use std::path::PathBuf;

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Training config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Training samples (JSONL).
    #[arg(long)]
    train_data: PathBuf,
    /// Validation samples (JSONL).
    #[arg(long)]
    val_data: PathBuf,
    /// Overrides the config's seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

pub fn run(args: TrainArgs) -> CliResult {
    let text = std::fs::read_to_string(&args.config)
        .or_usage(&format!("reading config {}", args.config.display()))?;
    let mut config: TrainConfig = serde_json::from_str(&text)
        .or_usage(&format!("parsing config {}", args.config.display()))?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }

    let train_data = data::load_jsonl(&args.train_data)
        .or_usage(&format!("loading {}", args.train_data.display()))?;
    let val_data = data::load_jsonl(&args.val_data)
        .or_usage(&format!("loading {}", args.val_data.display()))?;
    config
        .validate(train_data.len())
        .map_err(|e| CliError::Usage(e.into()))?;

    crate::ensure_out_dir(&args.out_dir)?;
    let resolved = serde_json::json!({
        "train": config,
        "train_data": args.train_data.display().to_string(),
        "val_data": args.val_data.display().to_string(),
    });
    let mut manifest = ManifestBuilder::new("train", &args.out_dir, resolved);
    manifest
        .seeds(&[config.seed])
        .input(&args.config)
        .input(&args.train_data)
        .input(&args.val_data);

    let outcome = trainer::train(&config, &train_data, &val_data).or_runtime("training")?;

    let mut log_blob = String::new();
    for record in &outcome.log {
        log_blob.push_str(&serde_json::to_string(record).or_runtime("serializing log")?);
        log_blob.push('\n');
    }
    let log_path = manifest.write_artifact("train_log.jsonl", log_blob.as_bytes())?;

    let mut checkpoint =
        serde_json::to_vec_pretty(&outcome.best_params).or_runtime("serializing checkpoint")?;
    checkpoint.push(b'\n');
    let ckpt_path = manifest.write_artifact("checkpoint.json", &checkpoint)?;
    manifest.finish()?;

    println!(
        "trained {} steps ({} evals); best {:?} = {}",
        outcome.log.len(),
        outcome.evals.len(),
        config.checkpoint_metric,
        outcome
            .best_metric
            .map_or_else(|| "n/a".to_owned(), |m| format!("{m:.4}")),
    );
    let weights = outcome.final_epoch_weights;
    if let (Some(clean), Some(corrupted)) = (weights.clean, weights.corrupted) {
        println!("final-epoch mean weight: clean {clean:.4}, corrupted {corrupted:.4}");
    }
    println!("wrote {} and {}", log_path.display(), ckpt_path.display());
    Ok(())
}

//! `currloss gen-data`

use crate::errors::{Classify, CliError, CliResult};
use crate::manifest::ManifestBuilder;
use clap::{Args, ValueEnum};
use currloss_core::data::{self, DatasetSpec, TaskSpec};
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TaskArg {
    TwoGaussianClassification,
    LinearRegression,
}

#[derive(Debug, Args)]
pub struct GenDataArgs {
    /// Dataset spec as a JSON file; inline flags are ignored when set
    /// (except --seed, which overrides).
    #[arg(long)]
    spec: Option<PathBuf>,

    #[arg(long, value_enum, required_unless_present = "spec")]
    task: Option<TaskArg>,
    #[arg(long, required_unless_present = "spec")]
    n_train: Option<usize>,
    #[arg(long, required_unless_present = "spec")]
    n_val: Option<usize>,
    #[arg(long, required_unless_present = "spec")]
    dim: Option<usize>,
    /// Label-flip probability (classification) or outlier rate
    /// (regression), in [0, 1).
    #[arg(long, default_value_t = 0.0)]
    noise_rate: f64,
    /// Distance between class means (classification).
    #[arg(long, default_value_t = 2.0)]
    class_separation: f64,
    /// Observation noise scale (regression).
    #[arg(long, default_value_t = 1.0)]
    noise_sigma: f64,

    /// Overrides the spec's seed when both are given.
    #[arg(long)]
    seed: Option<u64>,

    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

fn resolve_spec(args: &GenDataArgs) -> CliResult<DatasetSpec> {
    let mut spec = match &args.spec {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .or_usage(&format!("reading spec {}", path.display()))?;
            serde_json::from_str::<DatasetSpec>(&text)
                .or_usage(&format!("parsing spec {}", path.display()))?
        }
        None => DatasetSpec {
            task: match args.task.expect("clap enforces --task without --spec") {
                TaskArg::TwoGaussianClassification => TaskSpec::TwoGaussianClassification {
                    class_separation: args.class_separation,
                },
                TaskArg::LinearRegression => TaskSpec::LinearRegression {
                    noise_sigma: args.noise_sigma,
                },
            },
            n_train: args.n_train.expect("clap enforces --n-train"),
            n_val: args.n_val.expect("clap enforces --n-val"),
            dim: args.dim.expect("clap enforces --dim"),
            noise_rate: args.noise_rate,
            seed: 0,
        },
    };
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    spec.validate().map_err(|e| CliError::Usage(e.into()))?;
    Ok(spec)
}

pub fn run(args: GenDataArgs) -> CliResult {
    let spec = resolve_spec(&args)?;
    crate::ensure_out_dir(&args.out_dir)?;

    let config = serde_json::to_value(spec).or_runtime("serializing spec")?;
    let mut manifest = ManifestBuilder::new("gen-data", &args.out_dir, config);
    manifest.seeds(&[spec.seed]);
    if let Some(path) = &args.spec {
        manifest.input(path);
    }

    let (train, val) = data::generate(&spec).or_runtime("generating dataset")?;
    let train_path =
        manifest.write_artifact("train.jsonl", data::samples_to_jsonl(&train).as_bytes())?;
    let val_path = manifest.write_artifact("val.jsonl", data::samples_to_jsonl(&val).as_bytes())?;
    manifest.finish()?;

    println!(
        "wrote {} ({} samples) and {} ({} samples)",
        train_path.display(),
        train.len(),
        val_path.display(),
        val.len()
    );
    Ok(())
}

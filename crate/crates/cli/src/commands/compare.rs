//! `currloss compare`

use crate::errors::{Classify, CliError, CliResult};
use crate::manifest::ManifestBuilder;
use crate::Format;
use clap::Args;
use currloss_core::data::DatasetSpec;
use currloss_core::trainer::{self, ComparisonReport, TrainConfig, TrainMode};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

/// Spec file for a comparison study: the dataset template, the training
/// template (its `mode` is ignored; both arms are derived from it), and
/// optionally the seeds.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct CompareSpec {
    dataset: DatasetSpec,
    train: TrainConfig,
    #[serde(default)]
    seeds: Vec<u64>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Comparison spec (JSON with `dataset`, `train`, optional `seeds`).
    #[arg(long)]
    spec: PathBuf,
    /// Comma-separated seed list; overrides the spec's seeds.
    #[arg(long, value_delimiter = ',')]
    seeds: Vec<u64>,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

fn thread_cap() -> CliResult<Option<usize>> {
    match std::env::var("CURRLOSS_THREADS") {
        Err(_) => Ok(None),
        Ok(raw) => {
            let n: usize = raw.trim().parse().or_usage("parsing CURRLOSS_THREADS")?;
            if n == 0 {
                return Err(CliError::usage("CURRLOSS_THREADS must be >= 1"));
            }
            Ok(Some(n))
        }
    }
}

fn print_table(report: &ComparisonReport) {
    println!("seed        baseline    curriculum  winner");
    for run in &report.runs {
        println!(
            "{:<10}  {:<10.4}  {:<10.4}  {:?}",
            run.seed, run.baseline.best_metric, run.curriculum.best_metric, run.winner
        );
    }
    println!();
    let s = &report.summary;
    println!(
        "mode        {:?} (mean +- std)      improvement",
        report.metric
    );
    println!(
        "baseline    {:.4} +- {:.4}            -",
        s.baseline_mean, s.baseline_std
    );
    println!(
        "curriculum  {:.4} +- {:.4}            {}",
        s.curriculum_mean,
        s.curriculum_std,
        s.relative_improvement_pct
            .map_or_else(|| "n/a".to_owned(), |p| format!("{p:+.2}%")),
    );
    println!(
        "gap {:+.4}; wins {} / losses {} / ties {}",
        s.mean_gap, s.wins, s.losses, s.ties
    );

    let splits: Vec<_> = report
        .runs
        .iter()
        .filter_map(|r| {
            Some((
                r.curriculum.final_epoch_weights.clean?,
                r.curriculum.final_epoch_weights.corrupted?,
            ))
        })
        .collect();
    if !splits.is_empty() {
        let n = splits.len() as f64;
        let clean: f64 = splits.iter().map(|s| s.0).sum::<f64>() / n;
        let corrupted: f64 = splits.iter().map(|s| s.1).sum::<f64>() / n;
        println!("curriculum final-epoch mean weight: clean {clean:.4}, corrupted {corrupted:.4}");
    }
}

pub fn run(args: CompareArgs) -> CliResult {
    let text = std::fs::read_to_string(&args.spec)
        .or_usage(&format!("reading spec {}", args.spec.display()))?;
    let mut spec: CompareSpec =
        serde_json::from_str(&text).or_usage(&format!("parsing spec {}", args.spec.display()))?;
    if !args.seeds.is_empty() {
        spec.seeds = args.seeds.clone();
    }
    if spec.seeds.is_empty() {
        return Err(CliError::usage(
            "no seeds: pass --seeds or put a `seeds` array in the spec",
        ));
    }
    spec.dataset
        .validate()
        .map_err(|e| CliError::Usage(e.into()))?;

    let curriculum = TrainConfig {
        mode: TrainMode::Curriculum,
        ..spec.train.clone()
    };
    let baseline = TrainConfig {
        mode: TrainMode::Baseline,
        ..spec.train.clone()
    };
    let threads = thread_cap()?;

    crate::ensure_out_dir(&args.out_dir)?;
    let resolved = serde_json::to_value(&spec).or_runtime("serializing spec")?;
    let mut manifest = ManifestBuilder::new("compare", &args.out_dir, resolved);
    manifest.seeds(&spec.seeds).input(&args.spec);

    let report = trainer::compare(&curriculum, &baseline, &spec.dataset, &spec.seeds, threads)
        .or_runtime("running comparison")?;

    let mut bytes = serde_json::to_vec_pretty(&report).or_runtime("serializing report")?;
    bytes.push(b'\n');
    let report_path = manifest.write_artifact("comparison.json", &bytes)?;
    manifest.finish()?;

    if args.format == Format::Table {
        print_table(&report);
    }
    println!("wrote {}", report_path.display());
    Ok(())
}

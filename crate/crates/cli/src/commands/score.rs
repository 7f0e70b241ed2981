//! `currloss score`

use crate::errors::{Classify, CliError, CliResult};
use crate::manifest::ManifestBuilder;
use crate::output::round4;
use crate::Format;
use clap::Args;
use currloss_core::metrics::{rouge_l, rouge_n, RougeScore};
use serde::Serialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Candidate summaries, one per line.
    #[arg(long)]
    candidates: PathBuf,
    /// Reference summaries, one per line (same line count).
    #[arg(long)]
    references: PathBuf,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Debug, Serialize)]
struct Rounded {
    recall: f64,
    precision: f64,
    f1: f64,
}

impl From<RougeScore> for Rounded {
    fn from(s: RougeScore) -> Self {
        Rounded {
            recall: round4(s.recall),
            precision: round4(s.precision),
            f1: round4(s.f1),
        }
    }
}

#[derive(Debug, Serialize)]
struct PairScores {
    line: usize,
    rouge_1: Rounded,
    rouge_2: Rounded,
    rouge_l: Rounded,
}

#[derive(Debug, Serialize)]
struct ScoreReport {
    pairs: Vec<PairScores>,
    means: MeanScores,
}

#[derive(Debug, Serialize)]
struct MeanScores {
    rouge_1: Rounded,
    rouge_2: Rounded,
    rouge_l: Rounded,
}

fn read_lines(path: &Path) -> CliResult<Vec<String>> {
    let text = std::fs::read_to_string(path).or_usage(&format!("reading {}", path.display()))?;
    Ok(text.lines().map(str::to_owned).collect())
}

fn mean_of(scores: &[RougeScore]) -> RougeScore {
    let n = scores.len().max(1) as f64;
    RougeScore {
        recall: scores.iter().map(|s| s.recall).sum::<f64>() / n,
        precision: scores.iter().map(|s| s.precision).sum::<f64>() / n,
        f1: scores.iter().map(|s| s.f1).sum::<f64>() / n,
    }
}

pub fn run(args: ScoreArgs) -> CliResult {
    let candidates = read_lines(&args.candidates)?;
    let references = read_lines(&args.references)?;
    if candidates.len() != references.len() {
        return Err(CliError::usage(format!(
            "line counts differ: {} candidates vs {} references",
            candidates.len(),
            references.len()
        )));
    }

    let mut r1 = Vec::new();
    let mut r2 = Vec::new();
    let mut rl = Vec::new();
    let mut pairs = Vec::new();
    for (i, (cand, reference)) in candidates.iter().zip(&references).enumerate() {
        let s1 = rouge_n(cand, reference, 1);
        let s2 = rouge_n(cand, reference, 2);
        let sl = rouge_l(cand, reference);
        pairs.push(PairScores {
            line: i + 1,
            rouge_1: s1.into(),
            rouge_2: s2.into(),
            rouge_l: sl.into(),
        });
        r1.push(s1);
        r2.push(s2);
        rl.push(sl);
    }
    let report = ScoreReport {
        pairs,
        means: MeanScores {
            rouge_1: mean_of(&r1).into(),
            rouge_2: mean_of(&r2).into(),
            rouge_l: mean_of(&rl).into(),
        },
    };

    crate::ensure_out_dir(&args.out_dir)?;
    let config = serde_json::json!({
        "candidates": args.candidates.display().to_string(),
        "references": args.references.display().to_string(),
    });
    let mut manifest = ManifestBuilder::new("score", &args.out_dir, config);
    manifest.input(&args.candidates).input(&args.references);
    let mut bytes = serde_json::to_vec_pretty(&report).or_runtime("serializing scores")?;
    bytes.push(b'\n');
    let path = manifest.write_artifact("scores.json", &bytes)?;
    manifest.finish()?;

    if args.format == Format::Table {
        println!(
            "metric   recall   precision  f1       (corpus mean over {} pairs)",
            r1.len()
        );
        for (name, mean) in [
            ("ROUGE-1", &report.means.rouge_1),
            ("ROUGE-2", &report.means.rouge_2),
            ("ROUGE-L", &report.means.rouge_l),
        ] {
            println!(
                "{name}  {:<8.4} {:<10.4} {:<8.4}",
                mean.recall, mean.precision, mean.f1
            );
        }
    }
    println!("wrote {}", path.display());
    Ok(())
}

//! `currloss sigma-table`

use crate::errors::{Classify, CliError, CliResult};
use crate::manifest::ManifestBuilder;
use clap::Args;
use currloss_core::superloss;
use std::path::PathBuf;

#[derive(Debug, Args)]
pub struct SigmaTableArgs {
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    tau: f64,
    #[arg(long)]
    loss_min: f64,
    #[arg(long)]
    loss_max: f64,
    #[arg(long)]
    step: f64,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

pub fn run(args: SigmaTableArgs) -> CliResult {
    if !args.step.is_finite() || args.step <= 0.0 {
        return Err(CliError::usage(format!(
            "step must be > 0, got {}",
            args.step
        )));
    }
    if !(args.loss_min.is_finite() && args.loss_max.is_finite()) || args.loss_max < args.loss_min {
        return Err(CliError::usage(format!(
            "need loss_min <= loss_max, got [{}, {}]",
            args.loss_min, args.loss_max
        )));
    }

    // Inclusive endpoints: loss_i = loss_min + i * step while it fits.
    let count = ((args.loss_max - args.loss_min) / args.step + 1e-9).floor() as usize + 1;
    let mut csv = String::from("loss,beta,sigma_star,superloss_value,clamped\n");
    for i in 0..count {
        let loss = args.loss_min + i as f64 * args.step;
        let out =
            superloss::evaluate(loss, args.tau, args.lambda).or_usage("evaluating confidence")?;
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            loss, out.beta, out.sigma_star, out.value, out.clamped
        ));
    }

    crate::ensure_out_dir(&args.out_dir)?;
    let config = serde_json::json!({
        "lambda": args.lambda,
        "tau": args.tau,
        "loss_min": args.loss_min,
        "loss_max": args.loss_max,
        "step": args.step,
    });
    let mut manifest = ManifestBuilder::new("sigma-table", &args.out_dir, config);
    let path = manifest.write_artifact("sigma_table.csv", csv.as_bytes())?;
    manifest.finish()?;

    println!("wrote {} ({} rows)", path.display(), count);
    Ok(())
}

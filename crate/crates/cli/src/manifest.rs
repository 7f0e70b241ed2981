//! Per-run manifest: what ran, with which config, producing which
//! artifacts.

use crate::errors::{Classify, CliResult};
use crate::output::{sha256_hex, write_atomic};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Debug, Serialize)]
pub struct Artifact {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    pub config: serde_json::Value,
    pub seeds: Vec<u64>,
    pub inputs: Vec<String>,
    pub outputs: Vec<Artifact>,
    pub duration_seconds: f64,
}

/// Collects artifacts as they are written and lands `manifest.json` last.
pub struct ManifestBuilder {
    command: String,
    config: serde_json::Value,
    seeds: Vec<u64>,
    inputs: Vec<String>,
    outputs: Vec<Artifact>,
    started: Instant,
    out_dir: PathBuf,
}

impl ManifestBuilder {
    pub fn new(command: &str, out_dir: &Path, config: serde_json::Value) -> Self {
        ManifestBuilder {
            command: command.to_owned(),
            config,
            seeds: Vec::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            started: Instant::now(),
            out_dir: out_dir.to_owned(),
        }
    }

    pub fn seeds(&mut self, seeds: &[u64]) -> &mut Self {
        self.seeds = seeds.to_vec();
        self
    }

    pub fn input(&mut self, path: &Path) -> &mut Self {
        self.inputs.push(path.display().to_string());
        self
    }

    /// Writes one artifact atomically into the out dir and records its
    /// checksum.
    pub fn write_artifact(&mut self, file_name: &str, bytes: &[u8]) -> CliResult<PathBuf> {
        let path = self.out_dir.join(file_name);
        write_atomic(&path, bytes).or_runtime(&format!("writing {}", path.display()))?;
        self.outputs.push(Artifact {
            path: path.display().to_string(),
            sha256: sha256_hex(bytes),
        });
        Ok(path)
    }

    /// Finalizes `manifest.json`.
    pub fn finish(self) -> CliResult<PathBuf> {
        let manifest = RunManifest {
            command: self.command,
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            config: self.config,
            seeds: self.seeds,
            inputs: self.inputs,
            outputs: self.outputs,
            duration_seconds: self.started.elapsed().as_secs_f64(),
        };
        let path = self.out_dir.join("manifest.json");
        let mut bytes = serde_json::to_vec_pretty(&manifest).or_runtime("serializing manifest")?;
        bytes.push(b'\n');
        write_atomic(&path, &bytes).or_runtime("writing manifest.json")?;
        Ok(path)
    }
}

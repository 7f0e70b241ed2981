//! Output plumbing: atomic file writes, checksums, score rounding.

use sha2::{Digest, Sha256};
use std::io;
use std::path::Path;

/// Write-temp-then-rename, so partially written artifacts never appear
/// under their final name.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let mut tmp_name = path
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Scores are emitted with four decimal places.
pub fn round4(x: f64) -> f64 {
    (x * 1e4).round() / 1e4
}

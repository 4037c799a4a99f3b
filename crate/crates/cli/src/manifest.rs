//! Run manifests: enough provenance to regenerate any output bit-exactly
//! (tool version, resolved config, seed) plus checksums to verify one.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Result;

#[derive(Debug, Serialize)]
pub struct OutputRecord {
    /// File name relative to the output directory.
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub created_utc: String,
    pub base_seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_trials: Option<usize>,
    /// The fully resolved experiment document, CLI overrides applied.
    pub config: String,
    pub outputs: Vec<OutputRecord>,
}

impl RunManifest {
    pub fn new(command: &str, base_seed: u64, n_trials: Option<usize>, config: String) -> Self {
        RunManifest {
            tool: "fflsim",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            created_utc: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            base_seed,
            n_trials,
            config,
            outputs: Vec::new(),
        }
    }

    /// Checksums one freshly written output file.
    pub fn record(&mut self, path: &Path) -> Result<()> {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        self.outputs.push(OutputRecord {
            path: name,
            sha256: sha256_file(path)?,
        });
        Ok(())
    }

    pub fn write(&self, out_dir: &Path) -> Result<PathBuf> {
        let path = out_dir.join("manifest.json");
        let json = serde_json::to_string_pretty(self)
            .expect("manifest serialization cannot fail");
        fs::write(&path, json)?;
        Ok(path)
    }
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let mut file = fs::File::open(path)?;
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 64 * 1024];
    loop {
        let n = file.read(&mut buf)?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hex::encode(hasher.finalize()))
}

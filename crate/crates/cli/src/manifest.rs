use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

pub const MANIFEST_NAME: &str = "run-manifest.json";

#[derive(Debug, Serialize)]
pub struct OutputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub config: serde_json::Value,
    pub budget_cells: String,
    pub started_unix_ms: u64,
    pub finished_unix_ms: u64,
    pub exit_code: i32,
    pub outputs: Vec<OutputDigest>,
}

pub fn unix_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Collects every file a command writes so the manifest can list digests.
#[derive(Debug, Default)]
pub struct Outputs {
    pub files: Vec<OutputDigest>,
}

impl Outputs {
    pub fn write(&mut self, path: &Path, contents: &str) -> io::Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        fs::write(path, contents)?;
        self.files.push(OutputDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(contents.as_bytes()),
        });
        Ok(())
    }
}

pub fn write_manifest(dir: &Path, manifest: &RunManifest) -> io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(MANIFEST_NAME);
    let mut text = serde_json::to_string_pretty(manifest).map_err(io::Error::other)?;
    text.push('\n');
    fs::write(&path, text)?;
    Ok(path)
}

//! Per-directory record of the artifacts the CLI wrote: file hash, the
//! command and configuration that produced it, and the hashes of its inputs.
//!
//! Inputs listed in the manifest next to them are checked on load, so an
//! artifact edited after the fact is refused rather than silently used.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const MANIFEST_FILE: &str = "rcldpc-manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArtifactEntry {
    pub sha256: String,
    pub command: String,
    pub config: serde_json::Value,
    /// Input file → its hash when this artifact was made.
    #[serde(default)]
    pub inputs: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct WorkspaceManifest {
    /// Keyed by path relative to the manifest's directory.
    pub artifacts: BTreeMap<String, ArtifactEntry>,
}

pub fn file_hash(path: &Path) -> Result<String, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::from(e).context(path.display()))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// Directory holding the manifest responsible for `artifact`, and the key
/// of the artifact in it.
fn locate(artifact: &Path) -> (PathBuf, String) {
    let dir = match artifact.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let key = artifact
        .file_name()
        .map(|f| f.to_string_lossy().into_owned())
        .unwrap_or_default();
    (dir, key)
}

fn load(dir: &Path) -> Result<Option<WorkspaceManifest>, CliError> {
    let path = dir.join(MANIFEST_FILE);
    match std::fs::read_to_string(&path) {
        Ok(text) => serde_json::from_str(&text)
            .map(Some)
            .map_err(|e| CliError::from(e).context(path.display())),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(CliError::from(e).context(path.display())),
    }
}

/// Hash of an input file, after checking it against its manifest entry (if
/// any).
pub fn verify(artifact: &Path) -> Result<String, CliError> {
    let hash = file_hash(artifact)?;
    let (dir, key) = locate(artifact);
    if let Some(entry) = load(&dir)?.and_then(|m| m.artifacts.get(&key).cloned()) {
        if entry.sha256 != hash {
            return Err(CliError::Data(format!(
                "{} does not match its manifest entry (sha256 {hash}, recorded {})",
                artifact.display(),
                entry.sha256
            )));
        }
    }
    Ok(hash)
}

/// Adds or replaces the entry of a freshly written artifact.
pub fn record(
    artifact: &Path,
    command: &str,
    config: serde_json::Value,
    inputs: BTreeMap<String, String>,
) -> Result<(), CliError> {
    let (dir, key) = locate(artifact);
    let mut manifest = load(&dir)?.unwrap_or_default();
    let entry = ArtifactEntry {
        sha256: file_hash(artifact)?,
        command: command.into(),
        config,
        inputs,
    };
    manifest.artifacts.insert(key, entry);
    let path = dir.join(MANIFEST_FILE);
    std::fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")
        .map_err(|e| CliError::from(e).context(path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tampering_is_detected() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("a.txt");
        std::fs::write(&file, "one").unwrap();
        let unrecorded = verify(&file).unwrap();
        record(&file, "test", serde_json::json!({"x": 1}), BTreeMap::new()).unwrap();
        assert_eq!(verify(&file).unwrap(), unrecorded);
        std::fs::write(&file, "two").unwrap();
        assert!(matches!(verify(&file), Err(CliError::Data(_))));
    }
}

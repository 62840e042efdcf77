//! Run manifests: a JSON record written next to every output file that
//! captures enough of the invocation to reproduce it.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use augmenta_core::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Everything needed to rerun one subcommand invocation. Serialized as
/// pretty JSON with sorted config keys, so equal invocations produce
/// byte-identical manifests (given a pinned `SOURCE_DATE_EPOCH`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    /// Resolved flag values by long flag name, after defaults and
    /// environment variables are applied.
    pub config: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub tool_version: String,
    /// Unix seconds. Taken from `SOURCE_DATE_EPOCH` when set, so
    /// reproducible builds can pin it.
    pub timestamp: u64,
}

impl RunManifest {
    pub fn new(
        subcommand: &str,
        config: BTreeMap<String, String>,
        seed: Option<u64>,
        inputs: Vec<String>,
        outputs: Vec<String>,
    ) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            config,
            seed,
            inputs,
            outputs,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: current_timestamp(),
        }
    }
}

fn current_timestamp() -> u64 {
    if let Ok(raw) = std::env::var("SOURCE_DATE_EPOCH") {
        if let Ok(epoch) = raw.trim().parse() {
            return epoch;
        }
        log::warn!("ignoring unparseable SOURCE_DATE_EPOCH {raw:?}");
    }
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Where the manifest for an output file lives: the same path with
/// `.manifest.json` appended (`out.tsv` → `out.tsv.manifest.json`).
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    name.push(".manifest.json");
    output.with_file_name(name)
}

/// Writes the manifest next to each of its output files.
pub(crate) fn write_manifests(manifest: &RunManifest) -> Result<()> {
    let mut body = serde_json::to_string_pretty(manifest)
        .map_err(|e| Error::Config(format!("cannot serialize manifest: {e}")))?;
    body.push('\n');
    for output in &manifest.outputs {
        let path = manifest_path(Path::new(output));
        std::fs::write(&path, &body).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

pub fn load_manifest(path: &Path) -> Result<RunManifest> {
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&content)
        .map_err(|e| Error::Config(format!("{}: not a run manifest: {e}", path.display())))
}

/// Replays the invocation a manifest records and returns the process exit
/// code of the rerun. With unchanged inputs this regenerates every output
/// byte-for-byte (pin `SOURCE_DATE_EPOCH` to also pin manifest timestamps).
pub fn rerun_from_manifest(path: &Path) -> Result<i32> {
    let manifest = load_manifest(path)?;
    let argv = crate::commands::manifest_argv(&manifest)?;
    Ok(crate::run_with_args(argv))
}

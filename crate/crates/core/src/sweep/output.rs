//! Atomic file output and run manifests.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};

use super::config::Settings;

/// Writes `bytes` to a sibling temporary file and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(format!(".tmp{}", std::process::id()));
    let tmp = path.with_file_name(name);
    let write = || -> std::io::Result<()> {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    };
    write().map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::io(path, e)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Complete,
    /// Some points failed and `keep-going` was set.
    Partial,
    /// Some points failed; no result files were written.
    Failed,
}

impl RunStatus {
    pub fn exit_code(self) -> i32 {
        match self {
            RunStatus::Complete => 0,
            RunStatus::Failed => 2,
            RunStatus::Partial => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct RunInfo {
    pub status: RunStatus,
    pub version: String,
    pub outputs: Vec<String>,
    pub failures: Vec<String>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    #[serde(flatten)]
    settings: &'a Settings,
    run: &'a RunInfo,
}

pub const MANIFEST_NAME: &str = "manifest.toml";

/// Resolved settings followed by a `[run]` table; loadable with `--config`.
pub fn manifest_toml(settings: &Settings, run: &RunInfo) -> String {
    toml::to_string(&Manifest { settings, run }).expect("manifest serializes to TOML")
}

pub fn write_manifest(dir: &Path, settings: &Settings, run: &RunInfo) -> Result<PathBuf> {
    let path = dir.join(MANIFEST_NAME);
    write_atomic(&path, manifest_toml(settings, run).as_bytes())?;
    Ok(path)
}

//! On-disk report cache for optimization jobs.
//!
//! Enabled only when `CYCLEVOL_CACHE_DIR` is set. Entries are keyed by a
//! SHA-256 of the canonical job JSON together with the numerical settings
//! and the crate version, and written with a write-then-rename so that
//! concurrent jobs never observe a partial file.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::json;
use sha2::{Digest, Sha256};

use crate::job::{JobSpec, Outcome, Settings};
use crate::json::{q_str, Report};

pub const ENV_VAR: &str = "CYCLEVOL_CACHE_DIR";

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn from_env() -> Option<Self> {
        std::env::var_os(ENV_VAR)
            .filter(|v| !v.is_empty())
            .map(Cache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Hex SHA-256 of the job as a canonical JSON document. Object keys are
    /// sorted by `serde_json`'s map, so field order in the input is irrelevant.
    pub fn key(job: &JobSpec, settings: &Settings) -> String {
        let canonical = json!({
            "version": env!("CARGO_PKG_VERSION"),
            "variety": job.variety,
            "command": job.command,
            "payload": job.payload,
            "tol": q_str(&settings.tol),
            "grid": settings.grid,
        });
        let digest = Sha256::digest(canonical.to_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> Option<Outcome> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        Some(Outcome {
            report: entry.report,
            exit_code: entry.exit_code,
        })
    }

    pub fn put(&self, key: &str, outcome: &Outcome) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let entry = Entry {
            report: outcome.report.clone(),
            exit_code: outcome.exit_code,
        };
        let mut file = tempfile::NamedTempFile::new_in(&self.dir)?;
        serde_json::to_writer(&mut file, &entry)?;
        file.flush()?;
        file.persist(self.path(key)).map_err(|e| e.error)?;
        Ok(())
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct Entry {
    report: Report,
    exit_code: u8,
}

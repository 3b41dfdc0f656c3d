//! On-disk result cache under `MLP_CACHE_DIR`, one JSON file per
//! `(D, k, augmented, version)`. Writes go through a temporary file in the
//! same directory and are renamed into place.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use crate::error::CliError;
use crate::record::{ResultRecord, TOOL_VERSION};

pub const CACHE_ENV: &str = "MLP_CACHE_DIR";

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV)
            .filter(|v| !v.is_empty())
            .map(|dir| Cache { dir: dir.into() })
    }

    fn path(&self, disc: i64, k: i64, augmented: bool) -> PathBuf {
        let mode = if augmented { "aug" } else { "std" };
        self.dir.join(format!("D{disc}_k{k}_{mode}_v{TOOL_VERSION}.json"))
    }

    /// Cached text, if present and describing the requested job.
    pub fn load(&self, disc: i64, k: i64, augmented: bool) -> Option<String> {
        let text = fs::read_to_string(self.path(disc, k, augmented)).ok()?;
        let rec: ResultRecord = serde_json::from_str(&text).ok()?;
        let matches = rec.disc == disc
            && rec.k == k
            && rec.flags.augmented == augmented
            && rec.tool_version == TOOL_VERSION;
        matches.then_some(text)
    }

    pub fn store(&self, disc: i64, k: i64, augmented: bool, text: &str) -> Result<(), CliError> {
        let io = |e| CliError::io(&self.dir, e);
        fs::create_dir_all(&self.dir).map_err(io)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(io)?;
        tmp.write_all(text.as_bytes()).map_err(io)?;
        let target = self.path(disc, k, augmented);
        tmp.persist(&target).map_err(|e| CliError::io(&target, e.error))?;
        Ok(())
    }
}

//! On-disk cache of obstruction tables, keyed by the fan's content hash.

use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::nerve::{ObstructionTable, RaySubset};

pub const CACHE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
struct CacheEntry {
    alpha: Vec<usize>,
    cohomology: Vec<(i64, usize)>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
struct CacheFile {
    version: u32,
    fan_hash: String,
    entries: Vec<CacheEntry>,
}

fn cache_err(e: impl std::fmt::Display) -> Error {
    Error::Cache(e.to_string())
}

pub fn cache_path(dir: &Path, fan: &Fan) -> PathBuf {
    dir.join(format!("obstruction-{}.json", fan.content_hash()))
}

fn to_file(fan: &Fan, table: &ObstructionTable) -> CacheFile {
    CacheFile {
        version: CACHE_VERSION,
        fan_hash: fan.content_hash(),
        entries: table
            .entries
            .iter()
            .map(|(a, h)| CacheEntry { alpha: a.one_based(), cohomology: h.clone() })
            .collect(),
    }
}

/// The cached table, if present, current and matching `fan`.
pub fn load(dir: &Path, fan: &Fan) -> Result<Option<ObstructionTable>> {
    let path = cache_path(dir, fan);
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(cache_err(e)),
    };
    let file: CacheFile = serde_json::from_str(&text).map_err(cache_err)?;
    if file.version != CACHE_VERSION || file.fan_hash != fan.content_hash() {
        return Ok(None);
    }
    let mut entries = std::collections::BTreeMap::new();
    for e in file.entries {
        if e.alpha.iter().any(|&i| i == 0 || i > fan.num_rays()) {
            return Err(Error::Cache(format!("ray index out of range in {}", path.display())));
        }
        entries.insert(RaySubset::from_one_based(&e.alpha), e.cohomology);
    }
    Ok(Some(ObstructionTable { num_rays: fan.num_rays(), dim: fan.dim(), entries }))
}

/// Writes through a temporary file and an atomic rename.
pub fn store(dir: &Path, fan: &Fan, table: &ObstructionTable) -> Result<()> {
    fs::create_dir_all(dir).map_err(cache_err)?;
    let path = cache_path(dir, fan);
    let tmp = path.with_extension(format!("json.tmp{}", std::process::id()));
    let body = serde_json::to_string_pretty(&to_file(fan, table)).map_err(cache_err)?;
    {
        let mut f = File::create(&tmp).map_err(cache_err)?;
        f.write_all(body.as_bytes()).map_err(cache_err)?;
        f.write_all(b"\n").map_err(cache_err)?;
        f.sync_all().map_err(cache_err)?;
    }
    fs::rename(&tmp, &path).map_err(cache_err)
}

/// Cached table for `fan`, computing and storing it on a miss. Concurrent
/// callers on the same directory serialize on an exclusive lock file.
pub fn load_or_compute(dir: &Path, fan: &Fan, cap: usize) -> Result<ObstructionTable> {
    fs::create_dir_all(dir).map_err(cache_err)?;
    let lock_path = dir.join(format!("obstruction-{}.lock", fan.content_hash()));
    let lock = OpenOptions::new().create(true).truncate(false).write(true).open(&lock_path).map_err(cache_err)?;
    lock.lock().map_err(cache_err)?;
    let result = match load(dir, fan)? {
        Some(t) => Ok(t),
        None => {
            let t = ObstructionTable::compute(fan, cap)?;
            store(dir, fan, &t)?;
            Ok(t)
        }
    };
    lock.unlock().map_err(cache_err)?;
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::nerve::DEFAULT_RAY_CAP;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let fan = catalog::blowup_projective_space(3);
        assert_eq!(load(dir.path(), &fan).unwrap(), None);
        let computed = load_or_compute(dir.path(), &fan, DEFAULT_RAY_CAP).unwrap();
        assert!(cache_path(dir.path(), &fan).exists());
        let loaded = load(dir.path(), &fan).unwrap().unwrap();
        assert_eq!(computed, loaded);
        assert_eq!(load_or_compute(dir.path(), &fan, DEFAULT_RAY_CAP).unwrap(), computed);
    }

    #[test]
    fn stale_or_corrupt_files() {
        let dir = tempfile::tempdir().unwrap();
        let fan = catalog::projective_space(2);
        let path = cache_path(dir.path(), &fan);
        fs::write(&path, r#"{"version":0,"fan_hash":"x","entries":[]}"#).unwrap();
        assert_eq!(load(dir.path(), &fan).unwrap(), None);
        fs::write(&path, "not json").unwrap();
        assert!(matches!(load(dir.path(), &fan), Err(Error::Cache(_))));
    }

    #[test]
    fn byte_identical_after_rebuild() {
        let dir = tempfile::tempdir().unwrap();
        let fan = catalog::blowup_projective_space(2);
        load_or_compute(dir.path(), &fan, DEFAULT_RAY_CAP).unwrap();
        let first = fs::read(cache_path(dir.path(), &fan)).unwrap();
        fs::remove_file(cache_path(dir.path(), &fan)).unwrap();
        load_or_compute(dir.path(), &fan, DEFAULT_RAY_CAP).unwrap();
        assert_eq!(first, fs::read(cache_path(dir.path(), &fan)).unwrap());
    }
}

//! On-disk cache of canonical JSON documents.
//!
//! Entries are named by the SHA-256 of their key and carry the SHA-256 of
//! their body; an entry whose key or hash does not match is treated as
//! missing. Writes go through a temporary file and a rename.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::Result;

pub const CACHE_ENV: &str = "QUADCAP_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    sha256: String,
    body: String,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

pub fn sha256_hex(data: &[u8]) -> String {
    hex::encode(Sha256::digest(data))
}

impl Cache {
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        fs::create_dir_all(dir.as_ref())?;
        Ok(Cache { dir: dir.as_ref().to_path_buf() })
    }

    /// `--cache-dir`, else the environment override, else no cache.
    pub fn from_option(dir: Option<&Path>) -> Result<Option<Self>> {
        match dir {
            Some(d) => Ok(Some(Self::open(d)?)),
            None => match std::env::var_os(CACHE_ENV) {
                Some(d) if !d.is_empty() => Ok(Some(Self::open(PathBuf::from(d))?)),
                _ => Ok(None),
            },
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{}.json", sha256_hex(key.as_bytes())))
    }

    /// The stored document, if present and intact.
    pub fn get(&self, key: &str) -> Option<Value> {
        let raw = fs::read(self.path_for(key)).ok()?;
        let entry: Entry = serde_json::from_slice(&raw).ok()?;
        if entry.key != key || entry.sha256 != sha256_hex(entry.body.as_bytes()) {
            return None;
        }
        serde_json::from_str(&entry.body).ok()
    }

    pub fn put(&self, key: &str, value: &Value) -> Result<()> {
        let body = serde_json::to_string(value)?;
        let entry = Entry { key: key.to_string(), sha256: sha256_hex(body.as_bytes()), body };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(&serde_json::to_vec(&entry)?)?;
        tmp.flush()?;
        tmp.persist(self.path_for(key)).map_err(|e| e.error)?;
        Ok(())
    }

    /// Cached value for `key`, computing and storing it on a miss.
    pub fn get_or_compute(&self, key: &str, compute: impl FnOnce() -> Result<Value>) -> Result<Value> {
        if let Some(v) = self.get(key) {
            return Ok(v);
        }
        let v = compute()?;
        self.put(key, &v)?;
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let v = json!({"a": 1, "b": [1, 2]});
        cache.put("k", &v).unwrap();
        assert_eq!(cache.get("k"), Some(v.clone()));
        assert_eq!(cache.get("other"), None);

        // tamper with the body but keep the stored hash
        let path = cache.path_for("k");
        let raw = fs::read_to_string(&path).unwrap();
        fs::write(&path, raw.replace("[1,2]", "[1,3]")).unwrap();
        assert_eq!(cache.get("k"), None);
        let mut calls = 0;
        let got = cache
            .get_or_compute("k", || {
                calls += 1;
                Ok(v.clone())
            })
            .unwrap();
        assert_eq!((got, calls), (v.clone(), 1));
        assert_eq!(cache.get("k"), Some(v));

        fs::write(&path, "not json").unwrap();
        assert_eq!(cache.get("k"), None);
    }
}

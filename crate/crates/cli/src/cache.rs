//! Content-addressed, write-once result cache.
//!
//! Entries live at `<dir>/<sha256(key material)>.json` and wrap the payload
//! with its own digest, so truncated or edited files are detected on load.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use log::{debug, info, warn};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const ENV_CACHE_DIR: &str = "REALCSTAR_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    sha256: String,
    payload: Value,
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// `$XDG_CACHE_HOME/realcstar`, falling back to `$HOME/.cache/realcstar`.
    pub fn default_dir() -> Option<PathBuf> {
        std::env::var_os("XDG_CACHE_HOME")
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
            .or_else(|| std::env::var_os("HOME").map(|h| Path::new(&h).join(".cache")))
            .map(|base| base.join("realcstar"))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// The cached payload for `key`. Unreadable or inconsistent entries are
    /// deleted with a warning and reported as a miss.
    pub fn load(&self, key: &str) -> Option<Value> {
        let path = self.path_for(key);
        let text = match fs::read(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                debug!("cache miss {key}");
                return None;
            }
            Err(e) => {
                warn!("cache entry {} unreadable ({e}); recomputing", path.display());
                return None;
            }
        };
        match serde_json::from_slice::<Entry>(&text) {
            Ok(entry) if entry.key == key && entry.sha256 == digest(payload_bytes(&entry.payload).as_bytes()) => {
                info!("cache hit {key}");
                Some(entry.payload)
            }
            _ => {
                warn!("corrupt cache entry {}; discarding and recomputing", path.display());
                if let Err(e) = fs::remove_file(&path) {
                    warn!("could not remove {}: {e}", path.display());
                }
                None
            }
        }
    }

    /// Stores `payload` under `key` unless an entry already exists.
    pub fn store(&self, key: &str, payload: &Value) {
        if let Err(e) = self.try_store(key, payload) {
            warn!("could not write cache entry {key}: {e}");
        }
    }

    fn try_store(&self, key: &str, payload: &Value) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let entry = Entry {
            key: key.to_string(),
            sha256: digest(payload_bytes(payload).as_bytes()),
            payload: payload.clone(),
        };
        let text = serde_json::to_vec(&entry).expect("entry serializes");
        let target = self.path_for(key);
        let tmp = self.dir.join(format!(".{key}.{}.tmp", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(&text)?;
            f.sync_all()?;
        }
        // hard_link refuses to replace an existing entry
        let linked = fs::hard_link(&tmp, &target);
        let _ = fs::remove_file(&tmp);
        match linked {
            Ok(()) => {
                info!("cache store {key}");
                Ok(())
            }
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => Ok(()),
            Err(e) => Err(e),
        }
    }
}

fn payload_bytes(payload: &Value) -> String {
    serde_json::to_string(payload).expect("value serializes")
}

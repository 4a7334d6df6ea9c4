use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, OnceLock};
use std::time::{SystemTime, UNIX_EPOCH};

use parking_lot::RwLock;
use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::monomials::{InvariantMonomial, MonomialContext};
use crate::coxring::PresentationKind;
use crate::error::Result;

/// Environment variable naming the on-disk cache directory.
pub const CACHE_DIR_ENV: &str = "SYMTENS_CACHE_DIR";

type Key = (String, PresentationKind, u32);

/// Memo of monomial lists per `(context fingerprint, kind, degree)`.
/// Concurrent readers; writers are exclusive.
#[derive(Default)]
pub struct MonomialCache {
    map: RwLock<HashMap<Key, Arc<Vec<InvariantMonomial>>>>,
}

impl MonomialCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or_compute(&self, ctx: &MonomialContext, kind: PresentationKind, deg: u32) -> Arc<Vec<InvariantMonomial>> {
        let key = (ctx.fingerprint().to_string(), kind, deg);
        if let Some(v) = self.map.read().get(&key) {
            return Arc::clone(v);
        }
        let list = Arc::new(ctx.enumerate(kind, deg));
        let mut w = self.map.write();
        Arc::clone(w.entry(key).or_insert(list))
    }

    pub fn len(&self) -> usize {
        self.map.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&self) {
        self.map.write().clear();
    }
}

/// Process-wide monomial cache.
pub fn global_cache() -> &'static MonomialCache {
    static CACHE: OnceLock<MonomialCache> = OnceLock::new();
    CACHE.get_or_init(MonomialCache::new)
}

/// Content-addressed JSON files. Writes go to a temporary file in the same
/// directory followed by an atomic rename, so concurrent writers of the
/// same key are safe.
#[derive(Clone, Debug)]
pub struct DiskCache {
    dir: PathBuf,
}

impl DiskCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        DiskCache { dir: dir.into() }
    }

    /// Directory from `explicit`, else from `SYMTENS_CACHE_DIR`, else none.
    pub fn resolve(explicit: Option<&Path>) -> Option<Self> {
        explicit
            .map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CACHE_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
            .map(DiskCache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Hex SHA-256 of the JSON encoding of `key`.
    pub fn key_hash<K: Serialize>(key: &K) -> Result<String> {
        let mut h = Sha256::new();
        h.update(serde_json::to_vec(key)?);
        Ok(hex::encode(h.finalize()))
    }

    fn path(&self, namespace: &str, hash: &str) -> PathBuf {
        self.dir.join(format!("{namespace}-{hash}.json"))
    }

    /// Unreadable or unparsable entries count as misses.
    pub fn load<T: DeserializeOwned>(&self, namespace: &str, hash: &str) -> Option<T> {
        let bytes = fs::read(self.path(namespace, hash)).ok()?;
        serde_json::from_slice(&bytes).ok()
    }

    pub fn store<T: Serialize>(&self, namespace: &str, hash: &str, value: &T) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let nanos = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_nanos());
        let tmp = self.dir.join(format!(".{namespace}-{hash}.{}.{nanos}.tmp", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(value)?)?;
        if let Err(e) = fs::rename(&tmp, self.path(namespace, hash)) {
            let _ = fs::remove_file(&tmp);
            return Err(e.into());
        }
        Ok(())
    }
}

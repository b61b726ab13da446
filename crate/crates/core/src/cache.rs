//! Persistent column cache in a versioned JSON format with sorted keys.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::canonical::{CanonicalColumn, CanonicalEngine};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::partition::Partition;

pub const CACHE_VERSION: &str = "qdecomp-cache/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub n: usize,
    pub mu: Partition,
    pub entries: Vec<(Partition, LaurentPoly)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheFile {
    pub version: String,
    pub entries: Vec<CacheEntry>,
}

impl CacheFile {
    /// Snapshot of every column held by `engine`, ordered by `(n, μ)`.
    pub fn from_engine(engine: &CanonicalEngine) -> Self {
        let mut cols: BTreeMap<(usize, Partition), CacheEntry> = BTreeMap::new();
        for col in engine.cached_columns() {
            cols.insert(
                (col.n, col.mu.clone()),
                CacheEntry {
                    n: col.n,
                    mu: col.mu.clone(),
                    entries: col.entries.iter().map(|(l, c)| (l.clone(), c.clone())).collect(),
                },
            );
        }
        CacheFile {
            version: CACHE_VERSION.to_string(),
            entries: cols.into_values().collect(),
        }
    }

    pub fn load_into(&self, engine: &CanonicalEngine) -> Result<usize> {
        for e in &self.entries {
            engine.insert_column(CanonicalColumn {
                mu: e.mu.clone(),
                n: e.n,
                entries: e.entries.iter().cloned().collect(),
            })?;
        }
        Ok(self.entries.len())
    }

    /// Canonical form: sorted object keys, no insignificant whitespace, trailing newline.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("cache serializes");
        let mut s = serde_json::to_string(&v).expect("value serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("cache file: {e}")))?;
        match v.get("version").and_then(|x| x.as_str()) {
            Some(CACHE_VERSION) => {}
            Some(other) => {
                return Err(Error::Parse(format!(
                    "cache version {other:?}, expected {CACHE_VERSION:?}"
                )));
            }
            None => return Err(Error::Parse("cache file has no version tag".into())),
        }
        serde_json::from_value(v).map_err(|e| Error::Parse(format!("cache file: {e}")))
    }
}

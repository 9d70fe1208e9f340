//! Append-only JSONL cache of point counts.

use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CacheRecord {
    pub curve_id: String,
    pub n: u32,
    pub count: String,
}

#[derive(Debug, Default)]
pub struct PointCountCache {
    path: Option<PathBuf>,
    entries: BTreeMap<(String, u32), BigInt>,
}

impl PointCountCache {
    pub fn disabled() -> Self {
        Self::default()
    }

    /// Loads every well-formed record; malformed lines are reported and skipped.
    pub fn open(path: &Path) -> Self {
        let mut entries = BTreeMap::new();
        if let Ok(text) = fs::read_to_string(path) {
            for (lineno, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let parsed = serde_json::from_str::<CacheRecord>(line)
                    .ok()
                    .and_then(|r| r.count.parse::<BigInt>().ok().map(|c| (r, c)));
                match parsed {
                    Some((r, c)) => {
                        entries.entry((r.curve_id, r.n)).or_insert(c);
                    }
                    None => eprintln!("warning: skipping corrupt cache line {} in {}", lineno + 1, path.display()),
                }
            }
        }
        Self { path: Some(path.to_path_buf()), entries }
    }

    pub fn get(&self, curve_id: &str, n: u32) -> Option<&BigInt> {
        self.entries.get(&(curve_id.to_string(), n))
    }

    pub fn insert(&mut self, curve_id: &str, n: u32, count: &BigInt) {
        let key = (curve_id.to_string(), n);
        if self.entries.contains_key(&key) {
            return;
        }
        self.entries.insert(key, count.clone());
        let Some(path) = &self.path else { return };
        let record = CacheRecord { curve_id: curve_id.to_string(), n, count: count.to_string() };
        let line = serde_json::to_string(&record).expect("record serializes");
        let written = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .and_then(|mut f| writeln!(f, "{line}"));
        if let Err(e) = written {
            eprintln!("warning: cannot write cache {}: {e}", path.display());
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

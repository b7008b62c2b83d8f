//! JSON Lines result store.
//!
//! The first line is a header naming the format and version; every further
//! line is one [`ClassificationRecord`]. Records are kept sorted by key, and
//! the whole file is rewritten through a temporary file and a rename, so a
//! crash never leaves a half-written store behind.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::StoreError;
use crate::patterns::Combination;

use super::record::ClassificationRecord;

pub const STORE_FORMAT: &str = "descartes-classification";
pub const STORE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> StoreError + '_ {
    move |source| StoreError::Io {
        path: path.display().to_string(),
        source,
    }
}

#[derive(Clone, Debug, Default)]
pub struct Store {
    path: Option<PathBuf>,
    records: BTreeMap<Combination, ClassificationRecord>,
}

impl Store {
    /// A store that is never written to disk.
    pub fn in_memory() -> Store {
        Store::default()
    }

    /// Empty store bound to `path`; nothing is written until [`Store::flush`].
    pub fn create(path: impl Into<PathBuf>) -> Store {
        Store {
            path: Some(path.into()),
            records: BTreeMap::new(),
        }
    }

    /// Reads an existing store, re-verifying every record.
    pub fn load(path: impl Into<PathBuf>) -> Result<Store, StoreError> {
        let path = path.into();
        let file = fs::File::open(&path).map_err(io_err(&path))?;
        let shown = path.display().to_string();
        let corrupt = |line: usize, message: String| StoreError::Corrupt {
            path: shown.clone(),
            line,
            message,
        };
        let mut records = BTreeMap::new();
        let mut saw_header = false;
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(io_err(&path))?;
            let lineno = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            if !saw_header {
                let header: Header = serde_json::from_str(&line)
                    .map_err(|e| corrupt(lineno, format!("bad header: {e}")))?;
                if header.format != STORE_FORMAT || header.version != STORE_VERSION {
                    return Err(corrupt(
                        lineno,
                        format!(
                            "unsupported store {} version {}",
                            header.format, header.version
                        ),
                    ));
                }
                saw_header = true;
                continue;
            }
            let record: ClassificationRecord =
                serde_json::from_str(&line).map_err(|e| corrupt(lineno, e.to_string()))?;
            record.verify().map_err(|e| corrupt(lineno, e))?;
            let key = record.key();
            if records.insert(key, record).is_some() {
                return Err(corrupt(lineno, format!("duplicate record for {key}")));
            }
        }
        if !saw_header {
            return Err(corrupt(1, "missing header".into()));
        }
        Ok(Store {
            path: Some(path),
            records,
        })
    }

    /// Loads `path` if it exists, else starts an empty store there.
    pub fn open(path: impl Into<PathBuf>) -> Result<Store, StoreError> {
        let path = path.into();
        if path.exists() {
            Store::load(path)
        } else {
            Ok(Store::create(path))
        }
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn contains(&self, key: &Combination) -> bool {
        self.records.contains_key(key)
    }

    pub fn get(&self, key: &Combination) -> Option<&ClassificationRecord> {
        self.records.get(key)
    }

    /// Inserts a record unless the key already holds a decided one.
    pub fn insert(&mut self, record: ClassificationRecord) {
        let key = record.key();
        match self.records.get(&key) {
            Some(existing) if existing.status.is_decided() && !record.status.is_decided() => {}
            _ => {
                self.records.insert(key, record);
            }
        }
    }

    pub fn records(&self) -> impl Iterator<Item = &ClassificationRecord> {
        self.records.values()
    }

    pub fn records_of_degree(&self, d: usize) -> impl Iterator<Item = &ClassificationRecord> {
        self.records.values().filter(move |r| r.degree == d)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut ds: Vec<usize> = self.records.values().map(|r| r.degree).collect();
        ds.dedup();
        ds
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// The store as text, header first.
    pub fn to_jsonl(&self) -> String {
        let header = Header {
            format: STORE_FORMAT.into(),
            version: STORE_VERSION,
        };
        let mut out = serde_json::to_string(&header).expect("header serializes");
        out.push('\n');
        for r in self.records.values() {
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        out
    }

    /// Contents with timing fields cleared.
    pub fn fingerprint(&self) -> Vec<ClassificationRecord> {
        self.records
            .values()
            .map(ClassificationRecord::without_timing)
            .collect()
    }

    /// Writes the store atomically (temporary file, then rename).
    pub fn flush(&self) -> Result<(), StoreError> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        let mut tmp = path.clone().into_os_string();
        tmp.push(".tmp");
        let tmp = PathBuf::from(tmp);
        {
            let mut f = fs::File::create(&tmp).map_err(io_err(&tmp))?;
            f.write_all(self.to_jsonl().as_bytes())
                .map_err(io_err(&tmp))?;
            f.sync_all().map_err(io_err(&tmp))?;
        }
        fs::rename(&tmp, path).map_err(io_err(path))
    }
}

/// Exclusive lock on a store path, held as `<store>.lock` until dropped.
#[derive(Debug)]
pub struct StoreLock {
    path: PathBuf,
}

impl StoreLock {
    pub fn acquire(store: &Path) -> Result<StoreLock, StoreError> {
        let mut lock = store.as_os_str().to_owned();
        lock.push(".lock");
        let path = PathBuf::from(lock);
        match fs::OpenOptions::new()
            .write(true)
            .create_new(true)
            .open(&path)
        {
            Ok(mut f) => {
                let _ = writeln!(f, "{}", std::process::id());
                Ok(StoreLock { path })
            }
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                Err(StoreError::Locked(store.display().to_string()))
            }
            Err(e) => Err(StoreError::Io {
                path: path.display().to_string(),
                source: e,
            }),
        }
    }
}

impl Drop for StoreLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

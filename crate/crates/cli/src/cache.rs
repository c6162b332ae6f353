//! Append-only result cache.
//!
//! One record per line, space-separated `name=value` fields:
//!
//! ```text
//! key=cyclic:7/r=3/k=3 count=381 method=formula version=0.1.0 timestamp=1760000000 digest=5f0c...
//! ```
//!
//! `digest` is the first 16 hex digits of the SHA-256 of the other fields.
//! Every record for a key must carry the same count; anything else is an
//! integrity error.

use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub key: String,
    pub count: String,
    pub method: String,
    pub version: String,
    pub timestamp: u64,
}

impl Record {
    fn body(&self) -> String {
        format!(
            "key={} count={} method={} version={} timestamp={}",
            self.key, self.count, self.method, self.version, self.timestamp
        )
    }

    fn digest(&self) -> String {
        let hash = format!("{:x}", Sha256::digest(self.body().as_bytes()));
        hash[..16].to_string()
    }

    pub fn to_line(&self) -> String {
        format!("{} digest={}", self.body(), self.digest())
    }

    pub fn parse(line: &str) -> Result<Record, String> {
        let mut fields = BTreeMap::new();
        for part in line.split(' ') {
            let (name, value) = part.split_once('=').ok_or_else(|| format!("malformed field {part:?}"))?;
            if fields.insert(name, value).is_some() {
                return Err(format!("repeated field {name:?}"));
            }
        }
        let take = |name: &str| fields.get(name).map(|v| v.to_string()).ok_or_else(|| format!("missing {name}"));
        let record = Record {
            key: take("key")?,
            count: take("count")?,
            method: take("method")?,
            version: take("version")?,
            timestamp: take("timestamp")?.parse().map_err(|_| "bad timestamp".to_string())?,
        };
        if fields.len() != 6 {
            return Err("unexpected fields".into());
        }
        if record.count.is_empty() || !record.count.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("count {:?} is not a decimal integer", record.count));
        }
        if take("digest")? != record.digest() {
            return Err("digest mismatch".into());
        }
        Ok(record)
    }
}

#[derive(Debug)]
pub struct Cache {
    path: PathBuf,
    records: BTreeMap<String, Vec<Record>>,
}

impl Cache {
    /// Loads and checks every record. A missing file is an empty cache.
    pub fn open(path: &Path) -> CliResult<Cache> {
        let mut cache = Cache { path: path.to_path_buf(), records: BTreeMap::new() };
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(cache),
            Err(e) => return Err(e.into()),
        };
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let rec = Record::parse(line).map_err(|e| CliError::Cache(format!("{}:{}: {e}", path.display(), i + 1)))?;
            cache.check_agrees(&rec)?;
            cache.records.entry(rec.key.clone()).or_default().push(rec);
        }
        Ok(cache)
    }

    fn check_agrees(&self, rec: &Record) -> CliResult<()> {
        if let Some(prev) = self.records.get(&rec.key).and_then(|v| v.first()) {
            if prev.count != rec.count {
                return Err(CliError::Cache(format!(
                    "{}: {} ({}) disagrees with {} ({})",
                    rec.key, rec.count, rec.method, prev.count, prev.method
                )));
            }
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&Record> {
        self.records.get(key).and_then(|v| v.first())
    }

    /// Appends a record unless one with the same key, count and method exists.
    pub fn store(&mut self, key: &str, count: &str, method: &str) -> CliResult<()> {
        let rec = Record {
            key: key.to_string(),
            count: count.to_string(),
            method: method.to_string(),
            version: VERSION.to_string(),
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        };
        self.check_agrees(&rec)?;
        let existing = self.records.get(key).map(Vec::as_slice).unwrap_or(&[]);
        if existing.iter().any(|r| r.method == method) {
            return Ok(());
        }
        let mut file = OpenOptions::new().create(true).append(true).open(&self.path)?;
        writeln!(file, "{}", rec.to_line())?;
        self.records.entry(rec.key.clone()).or_default().push(rec);
        Ok(())
    }
}

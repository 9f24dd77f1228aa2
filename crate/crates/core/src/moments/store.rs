//! On-disk moment tables.
//!
//! A table file is JSON:
//! `{format_version, domain, domain_hash, degree_cap, entries: [{alpha, value, abs_error, method}]}`.
//! Writes go to a temporary file in the target directory and are renamed
//! into place, so readers never observe a partial file.

use super::{build_table, index_set, Method, Moment, MomentTable, MultiIndex};
use crate::domains::DomainSpec;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::{Path, PathBuf};

/// Bumped whenever the file layout or the numerics behind stored values change.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct EntryFile {
    alpha: Vec<i32>,
    value: f64,
    abs_error: f64,
    method: Method,
}

#[derive(Serialize, Deserialize)]
struct TableFile {
    format_version: u32,
    domain: serde_json::Value,
    domain_hash: String,
    degree_cap: usize,
    entries: Vec<EntryFile>,
}

fn to_file(table: &MomentTable) -> TableFile {
    TableFile {
        format_version: FORMAT_VERSION,
        domain: table.domain.to_json(),
        domain_hash: table.domain_hash.clone(),
        degree_cap: table.degree_cap,
        entries: table
            .entries
            .iter()
            .map(|(a, m)| EntryFile { alpha: a.0.clone(), value: m.value, abs_error: m.abs_error, method: m.method })
            .collect(),
    }
}

pub fn save_table(table: &MomentTable, path: &Path) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    serde_json::to_writer(&mut tmp, &to_file(table))?;
    tmp.write_all(b"\n")?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn corrupt(msg: impl Into<String>) -> Error {
    Error::CorruptCache(msg.into())
}

/// Loads and validates a table file.
pub fn load_table(path: &Path) -> Result<MomentTable> {
    let text = std::fs::read_to_string(path)?;
    let file: TableFile = serde_json::from_str(&text).map_err(|e| corrupt(e.to_string()))?;
    if file.format_version != FORMAT_VERSION {
        return Err(Error::VersionMismatch { expected: FORMAT_VERSION, found: file.format_version });
    }
    let domain = DomainSpec::from_json(&file.domain).map_err(|e| corrupt(format!("domain: {e}")))?;
    if domain.domain_hash() != file.domain_hash {
        return Err(corrupt("stored domain hash does not match the stored descriptor"));
    }
    let (admissible, excluded) = index_set(&domain, file.degree_cap);
    let mut table = MomentTable {
        domain_hash: file.domain_hash,
        degree_cap: file.degree_cap,
        domain,
        entries: Default::default(),
        excluded,
    };
    for e in file.entries {
        let alpha = MultiIndex(e.alpha);
        if !(e.value.is_finite() && e.value > 0.0 && e.abs_error >= 0.0) {
            return Err(corrupt(format!("entry {:?} has invalid value", alpha.0)));
        }
        if table
            .entries
            .insert(alpha.clone(), Moment { value: e.value, abs_error: e.abs_error, method: e.method })
            .is_some()
        {
            return Err(corrupt(format!("duplicate entry {:?}", alpha.0)));
        }
    }
    let matches = table.entries.len() == admissible.len() && admissible.iter().all(|a| table.entries.contains_key(a));
    if !matches {
        return Err(corrupt("entries do not cover exactly the admissible indices up to the degree cap"));
    }
    Ok(table)
}

/// Loads a table and checks that it belongs to `spec`.
pub fn load_table_for(path: &Path, spec: &DomainSpec) -> Result<MomentTable> {
    let table = load_table(path)?;
    let expected = spec.domain_hash();
    if table.domain_hash != expected {
        return Err(Error::HashMismatch { expected, found: table.domain_hash });
    }
    Ok(table)
}

/// Directory of table files keyed by domain hash and degree cap.
#[derive(Debug, Clone)]
pub struct MomentCache {
    dir: PathBuf,
}

impl MomentCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn path_for(&self, spec: &DomainSpec, cap: usize) -> PathBuf {
        self.dir.join(format!("{}-d{cap}-v{FORMAT_VERSION}.json", spec.domain_hash()))
    }

    /// Returns the cached table when present and valid, otherwise builds and stores it.
    ///
    /// A stale or corrupt file is rebuilt. The tolerance is not part of the key.
    pub fn get_or_build(&self, spec: &DomainSpec, cap: usize, tol: f64) -> Result<MomentTable> {
        let path = self.path_for(spec, cap);
        if path.exists() {
            if let Ok(t) = load_table_for(&path, spec) {
                return Ok(t);
            }
        }
        let table = build_table(spec, cap, tol)?;
        save_table(&table, &path)?;
        Ok(table)
    }
}

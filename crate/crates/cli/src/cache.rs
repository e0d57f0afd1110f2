//! On-disk cache for filter enumerations and rank certificates.
//!
//! Entries are JSON files carrying a schema version and a content
//! checksum. Anything stale or corrupt is reported and recomputed,
//! never trusted.

use std::path::{Path, PathBuf};

use ctn::families::FamilySet;
use ctn::Transformation;
use serde::{Deserialize, Serialize};

pub const CACHE_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
pub struct CacheEntry {
    pub schema_version: u32,
    pub key: String,
    pub checksum: String,
    pub payload: serde_json::Value,
}

/// FNV-1a over the canonical payload text.
fn checksum(payload: &serde_json::Value) -> String {
    let text = serde_json::to_string(payload).expect("payload serializes");
    let mut hash: u64 = 0xcbf29ce484222325;
    for byte in text.as_bytes() {
        hash ^= *byte as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    format!("{hash:016x}")
}

fn file_for(dir: &Path, key: &str) -> PathBuf {
    let safe: String = key
        .chars()
        .map(|c| match c {
            'a'..='z' | 'A'..='Z' | '0'..='9' | '-' | '.' => c,
            '*' => 's',
            _ => '-',
        })
        .collect();
    dir.join(format!("{safe}.json"))
}

pub fn store(dir: &Path, key: &str, payload: serde_json::Value) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let entry = CacheEntry {
        schema_version: CACHE_SCHEMA_VERSION,
        key: key.to_string(),
        checksum: checksum(&payload),
        payload,
    };
    let path = file_for(dir, key);
    let tmp = path.with_extension("json.tmp");
    std::fs::write(
        &tmp,
        serde_json::to_string(&entry).expect("entry serializes"),
    )?;
    std::fs::rename(tmp, path)
}

/// Loads a payload, or `None` on miss. Stale schema versions miss
/// silently; corrupt entries warn on stderr and miss.
pub fn load(dir: &Path, key: &str) -> Option<serde_json::Value> {
    let path = file_for(dir, key);
    let text = std::fs::read_to_string(&path).ok()?;
    let entry: CacheEntry = match serde_json::from_str(&text) {
        Ok(entry) => entry,
        Err(err) => {
            eprintln!(
                "warning: corrupt cache entry {} ({err}); recomputing",
                path.display()
            );
            return None;
        }
    };
    if entry.schema_version != CACHE_SCHEMA_VERSION {
        return None;
    }
    if entry.key != key {
        eprintln!(
            "warning: cache entry {} keyed {:?}; recomputing",
            path.display(),
            entry.key
        );
        return None;
    }
    if checksum(&entry.payload) != entry.checksum {
        eprintln!(
            "warning: cache entry {} failed its checksum; recomputing",
            path.display()
        );
        return None;
    }
    Some(entry.payload)
}

pub fn family_to_payload(set: &FamilySet) -> serde_json::Value {
    let literals: Vec<String> = set.iter().map(|t| t.to_string()).collect();
    serde_json::json!({ "elements": literals })
}

pub fn family_from_payload(payload: &serde_json::Value, n: usize) -> Option<FamilySet> {
    let literals = payload.get("elements")?.as_array()?;
    let mut elements = Vec::with_capacity(literals.len());
    for lit in literals {
        let parsed: Transformation = lit.as_str()?.parse().ok()?;
        if parsed.degree() != n {
            return None;
        }
        elements.push(parsed);
    }
    FamilySet::from_elements(None, n, elements).ok()
}

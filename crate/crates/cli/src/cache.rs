//! Content-addressed report cache.
//!
//! An entry is a header line naming the format version and the SHA-256 of
//! the payload, followed by the payload. Writes go to a temporary file that
//! is renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

/// Bumped whenever report bytes may change for the same configuration.
pub const ARTIFACT_VERSION: &str = "dioph-report-1";

const MAGIC: &str = "dioph-cache";

pub struct Cache {
    root: PathBuf,
}

#[derive(Debug, PartialEq, Eq)]
pub enum Lookup {
    Hit(Vec<u8>),
    Miss,
    /// Present but unreadable or failing its checksum.
    Corrupt,
}

/// Hex SHA-256 of the identity text under `version`.
pub fn cache_key(identity: &str, version: &str) -> String {
    let mut h = Sha256::new();
    h.update(version.as_bytes());
    h.update(b"\n");
    h.update(identity.as_bytes());
    hex::encode(h.finalize())
}

impl Cache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Cache { root: root.into() }
    }

    fn path(&self, key: &str) -> PathBuf {
        self.root.join(&key[..2]).join(key)
    }

    pub fn get(&self, key: &str) -> Lookup {
        let Ok(bytes) = fs::read(self.path(key)) else { return Lookup::Miss };
        match decode(&bytes) {
            Some(p) => Lookup::Hit(p.to_vec()),
            None => Lookup::Corrupt,
        }
    }

    pub fn put(&self, key: &str, payload: &[u8]) -> std::io::Result<()> {
        let path = self.path(key);
        let dir = path.parent().expect("key path has a parent");
        fs::create_dir_all(dir)?;
        let mut tmp = tempfile_in(dir, key)?;
        writeln!(tmp.1, "{MAGIC} {ARTIFACT_VERSION} {}", hex::encode(Sha256::digest(payload)))?;
        tmp.1.write_all(payload)?;
        tmp.1.sync_all()?;
        drop(tmp.1);
        fs::rename(&tmp.0, &path)
    }
}

fn tempfile_in(dir: &Path, key: &str) -> std::io::Result<(PathBuf, fs::File)> {
    let path = dir.join(format!(".{key}.{}.tmp", std::process::id()));
    let f = fs::File::create(&path)?;
    Ok((path, f))
}

fn decode(bytes: &[u8]) -> Option<&[u8]> {
    let nl = bytes.iter().position(|&b| b == b'\n')?;
    let header = std::str::from_utf8(&bytes[..nl]).ok()?;
    let payload = &bytes[nl + 1..];
    let mut it = header.split(' ');
    if it.next()? != MAGIC || it.next()? != ARTIFACT_VERSION {
        return None;
    }
    (it.next()? == hex::encode(Sha256::digest(payload))).then_some(payload)
}

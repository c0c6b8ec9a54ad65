//! On-disk cache of minimal resolutions keyed by (group hash, K, maxdeg).

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use cohom_core::linalg::ModKMatrix;
use cohom_core::resolution::{minimal_resolution, FreeResolution};
use cohom_core::FiniteGroup;

use crate::error::{CliError, Result};

/// Bumped whenever the stored layout changes; other versions are ignored.
pub const CACHE_FORMAT: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Entry {
    format: u32,
    group_hash: String,
    k: u32,
    max_degree: usize,
    ranks: Vec<usize>,
    /// `boundaries[i]` is `d_{i+1}` as rows of residues
    boundaries: Vec<Vec<Vec<u8>>>,
}

pub struct ResolutionCache {
    dir: PathBuf,
}

impl ResolutionCache {
    pub fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        Ok(ResolutionCache { dir: dir.to_path_buf() })
    }

    fn path(&self, hash: &str, k: u32, maxdeg: usize) -> PathBuf {
        self.dir.join(format!("res-v{CACHE_FORMAT}-{}-k{k}-d{maxdeg}.json", &hash[..16]))
    }

    fn load(&self, g: &FiniteGroup, hash: &str, k: u32, maxdeg: usize) -> Option<FreeResolution> {
        let text = fs::read_to_string(self.path(hash, k, maxdeg)).ok()?;
        let e: Entry = serde_json::from_str(&text).ok()?;
        if e.format != CACHE_FORMAT || e.group_hash != hash || e.k != k || e.max_degree != maxdeg {
            return None;
        }
        let n = g.order();
        let mut bounds = Vec::with_capacity(e.boundaries.len());
        for (i, rows) in e.boundaries.iter().enumerate() {
            let cols = e.ranks.get(i)? * n;
            if rows.iter().any(|r| r.len() != cols) {
                return None;
            }
            bounds.push(ModKMatrix::from_rows(k, cols, rows));
        }
        let res = FreeResolution::from_parts(g.clone(), k, e.ranks, bounds).ok()?;
        res.is_minimal().then_some(res)
    }

    fn store(&self, hash: &str, res: &FreeResolution) -> Result<()> {
        let e = Entry {
            format: CACHE_FORMAT,
            group_hash: hash.to_string(),
            k: res.k(),
            max_degree: res.max_degree(),
            ranks: res.ranks().to_vec(),
            boundaries: res.boundaries().iter().map(|d| d.to_rows()).collect(),
        };
        let path = self.path(hash, res.k(), res.max_degree());
        let text = serde_json::to_string(&e).expect("cache entry serializes");
        fs::write(&path, text).map_err(|source| CliError::Io { path, source })
    }
}

/// Minimal resolution, read from or written to `cache` when given.
pub fn resolution(
    cache: Option<&ResolutionCache>,
    g: &FiniteGroup,
    hash: &str,
    k: u32,
    maxdeg: usize,
) -> Result<FreeResolution> {
    if let Some(c) = cache {
        if let Some(r) = c.load(g, hash, k, maxdeg) {
            return Ok(r);
        }
    }
    let r = minimal_resolution(g, k, maxdeg)?;
    if let Some(c) = cache {
        c.store(hash, &r)?;
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::input::group_hash;
    use cohom_core::group::builtin;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ResolutionCache::new(dir.path()).unwrap();
        let g = builtin("D4").unwrap();
        let h = group_hash(&g);
        let a = resolution(Some(&cache), &g, &h, 2, 3).unwrap();
        assert!(cache.path(&h, 2, 3).exists());
        let b = cache.load(&g, &h, 2, 3).unwrap();
        assert_eq!(a.ranks(), b.ranks());
        assert_eq!(a.boundaries(), b.boundaries());
    }

    #[test]
    fn corrupt_entries_are_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ResolutionCache::new(dir.path()).unwrap();
        let g = builtin("C4").unwrap();
        let h = group_hash(&g);
        fs::write(cache.path(&h, 1, 2), "{\"format\": 0}").unwrap();
        assert!(cache.load(&g, &h, 1, 2).is_none());
        assert_eq!(resolution(Some(&cache), &g, &h, 1, 2).unwrap().max_degree(), 2);
    }
}

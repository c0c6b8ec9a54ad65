//! Group and lattice sources: JSON files or `builtin:<name>`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use cohom_core::group::{builtin, BUILTIN_NAMES};
use cohom_core::lattice::{build_mnq, GLattice};
use cohom_core::linalg::IntMatrix;
use cohom_core::FiniteGroup;

use crate::error::{CliError, Result};

#[derive(Serialize, Deserialize)]
struct GroupFile {
    order: usize,
    table: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct LatticeFile {
    rank: usize,
    generators: Vec<GeneratorEntry>,
}

#[derive(Deserialize)]
struct GeneratorEntry {
    element: usize,
    matrix: Vec<Vec<i64>>,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })
}

/// A resolved group with its provenance.
pub struct LoadedGroup {
    pub source: String,
    pub group: FiniteGroup,
    pub hash: String,
}

pub fn load_group(src: &str) -> Result<LoadedGroup> {
    let group = match src.strip_prefix("builtin:") {
        Some(name) => builtin(name).ok_or_else(|| {
            CliError::Validation(format!("unknown builtin group {name:?} (known: {})", BUILTIN_NAMES.join(", ")))
        })?,
        None => {
            let f: GroupFile = read_json(&PathBuf::from(src))?;
            if f.table.len() != f.order {
                return Err(CliError::Validation(format!(
                    "table has {} rows but order is {}",
                    f.table.len(),
                    f.order
                )));
            }
            FiniteGroup::from_cayley_table(&f.table)?
        }
    };
    Ok(LoadedGroup {
        source: src.to_string(),
        hash: group_hash(&group),
        group,
    })
}

/// SHA-256 of the compact JSON group file of `g`.
pub fn group_hash(g: &FiniteGroup) -> String {
    let file = GroupFile {
        order: g.order(),
        table: g.table(),
    };
    let bytes = serde_json::to_vec(&file).expect("group table serializes");
    hex::encode(Sha256::digest(&bytes))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeSpec {
    M,
    Regular,
    Sign,
    File(PathBuf),
}

impl LatticeSpec {
    pub fn parse(src: &str) -> Result<Self> {
        match src.strip_prefix("builtin:") {
            Some("M") => Ok(LatticeSpec::M),
            Some("regular") => Ok(LatticeSpec::Regular),
            Some("sign") => Ok(LatticeSpec::Sign),
            Some(other) => Err(CliError::Validation(format!(
                "unknown builtin lattice {other:?} (known: M, regular, sign)"
            ))),
            None => Ok(LatticeSpec::File(PathBuf::from(src))),
        }
    }

    pub fn load(&self, g: &FiniteGroup) -> Result<GLattice> {
        Ok(match self {
            LatticeSpec::M => build_mnq(g)?.m,
            LatticeSpec::Regular => GLattice::regular(g),
            LatticeSpec::Sign => GLattice::sign(g)?,
            LatticeSpec::File(path) => {
                let f: LatticeFile = read_json(path)?;
                let mut gens = Vec::with_capacity(f.generators.len());
                for e in f.generators {
                    if e.element >= g.order() {
                        return Err(CliError::Validation(format!(
                            "generator element {} out of range for order {}",
                            e.element,
                            g.order()
                        )));
                    }
                    if e.matrix.len() != f.rank || e.matrix.iter().any(|r| r.len() != f.rank) {
                        return Err(CliError::Validation(format!(
                            "matrix for element {} is not {}×{}",
                            e.element, f.rank, f.rank
                        )));
                    }
                    gens.push((e.element, IntMatrix::from_rows(f.rank, &e.matrix)));
                }
                GLattice::from_generators(g, f.rank, &gens)?
            }
        })
    }
}

//! Report envelope and rendering.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::commands::{CohomologyJson, CriterionJson, LatticeInfoJson, PhiJson, SubspaceJson};
use crate::error::{CliError, Result};
use crate::input::LoadedGroup;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Serialize)]
pub struct GroupJson {
    pub source: String,
    pub order: usize,
    pub sha256: String,
}

#[derive(Serialize)]
#[serde(untagged)]
pub enum Payload {
    Cohomology(CohomologyJson),
    Criterion(Box<CriterionJson>),
    Phi(PhiJson),
    LatticeInfo(LatticeInfoJson),
}

/// Everything needed to reproduce a run. The thread count is left out so
/// that the output does not depend on it.
#[derive(Serialize)]
pub struct Envelope {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub group: GroupJson,
    pub config: serde_json::Value,
    pub result: Payload,
}

impl Envelope {
    pub fn new(command: &'static str, g: &LoadedGroup, config: serde_json::Value, result: Payload) -> Self {
        Envelope {
            tool: "cohom",
            version: env!("CARGO_PKG_VERSION"),
            command,
            group: GroupJson {
                source: g.source.clone(),
                order: g.group.order(),
                sha256: g.hash.clone(),
            },
            config,
            result,
        }
    }
}

pub fn to_json(e: &Envelope) -> String {
    let mut s = serde_json::to_string_pretty(e).expect("report serializes");
    s.push('\n');
    s
}

fn fmt_opt<T: std::fmt::Display>(x: &Option<T>) -> String {
    x.as_ref().map_or_else(|| "n/a".to_string(), |v| v.to_string())
}

fn fmt_space(name: &str, s: &SubspaceJson) -> String {
    format!("{name}: dim {} in H³ of dim {}", s.dim, s.ambient_dim)
}

pub fn to_text(e: &Envelope) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{} {} | group {} (order {}, sha256 {})",
        e.tool,
        e.version,
        e.group.source,
        e.group.order,
        &e.group.sha256[..12]
    );
    match &e.result {
        Payload::Cohomology(c) => {
            let _ = writeln!(s, "coefficients ℤ/2^{}, resolution ranks {:?}", c.modulus_exp, c.resolution_ranks);
            for d in &c.degrees {
                let _ = writeln!(
                    s,
                    "  H^{}: {} generators, invariant factors {:?}",
                    d.degree, d.num_generators, d.invariant_factors
                );
            }
        }
        Payload::Criterion(c) => {
            let _ = writeln!(s, "dim Hⁱ(G, ℤ/2), i = 0..3: {:?}", c.h_dims);
            let _ = writeln!(s, "{} subgroup classes", c.subgroups.len());
            let _ = writeln!(s, "{}", fmt_space("V_G", &c.v));
            let _ = writeln!(s, "{}", fmt_space("W_G", &c.w));
            if let Some(x) = &c.im_sq1 {
                let _ = writeln!(s, "{}", fmt_space("Im Sq¹", x));
            }
            if let Some(x) = &c.im_pi2 {
                let _ = writeln!(s, "{}", fmt_space("Im π₂", x));
            }
            let _ = writeln!(s, "criterion (a): {}", fmt_opt(&c.criterion_a));
            let _ = writeln!(s, "criterion (b): {}", fmt_opt(&c.criterion_b));
            if let Some(w) = &c.witness_b {
                let _ = writeln!(s, "witness (b): {w:?}");
            }
        }
        Payload::Phi(p) => {
            let _ = writeln!(
                s,
                "lattice rank {}, coflasque resolution 0 → R({}) → P({}) → L → 0",
                p.lattice_rank, p.coflasque_rank, p.permutation_rank
            );
            let _ = writeln!(s, "Φ invariant factors: {:?}", p.invariant_factors);
        }
        Payload::LatticeInfo(l) => {
            let _ = writeln!(s, "rank {}, rank Λ² {}", l.rank, l.lambda2_rank);
            let _ = writeln!(s, "torsion-free: {}", l.torsion_free);
            let _ = writeln!(s, "permutation: {}", fmt_opt(&l.is_permutation));
            let _ = writeln!(s, "rank of fixed points: {}", fmt_opt(&l.fixed_rank));
            if let Some(h) = &l.h1 {
                let _ = writeln!(s, "H¹(G, L) invariant factors: {h:?}");
            }
            let w = &l.regular_wedge;
            let _ = writeln!(s, "Λ²ℤ[G]: |S₁| = {}, |S₂| = {}, rank {}", w.s1, w.s2, w.rank);
        }
    }
    s
}

pub fn emit(e: &Envelope, format: Format, out: Option<&Path>) -> Result<()> {
    let text = match format {
        Format::Json => to_json(e),
        Format::Text => to_text(e),
    };
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

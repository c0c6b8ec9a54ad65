//! The four subcommands as pure functions from inputs to report payloads.

use rayon::prelude::*;
use serde::Serialize;

use cohom_core::cohomology::cohomology;
use cohom_core::criterion::{CriterionConfig, CriterionContext, CriterionReport, SubgroupTau, Which};
use cohom_core::lattice::alpha::MAX_ALPHA_ORDER;
use cohom_core::lattice::mnq::MAX_MNQ_ORDER;
use cohom_core::lattice::{h1_integral, lambda2_regular_decomposition, phi, rho_summary, RhoSummary};
use cohom_core::linalg::{BitVec, Subspace};
use cohom_core::{Error, Subgroup};

use crate::cache::{resolution, ResolutionCache};
use crate::error::{CliError, Result};
use crate::input::{LatticeSpec, LoadedGroup};

/// Subspace as reduced-echelon 0/1 rows.
#[derive(Debug, Serialize)]
pub struct SubspaceJson {
    pub ambient_dim: usize,
    pub dim: usize,
    pub rows: Vec<Vec<u8>>,
}

impl From<&Subspace> for SubspaceJson {
    fn from(s: &Subspace) -> Self {
        SubspaceJson {
            ambient_dim: s.ambient_dim(),
            dim: s.dim(),
            rows: s.to_rows(),
        }
    }
}

fn bits(v: &BitVec) -> Vec<u8> {
    v.to_residues()
}

#[derive(Debug, Serialize)]
pub struct DegreeJson {
    pub degree: usize,
    pub num_generators: usize,
    pub invariant_factors: Vec<u64>,
    pub log2_order: u32,
}

#[derive(Debug, Serialize)]
pub struct CohomologyJson {
    pub modulus_exp: u32,
    pub max_degree: usize,
    pub resolution_ranks: Vec<usize>,
    pub dims: Vec<usize>,
    pub degrees: Vec<DegreeJson>,
}

pub fn cmd_cohomology(
    g: &LoadedGroup,
    m: u32,
    maxdeg: usize,
    cache: Option<&ResolutionCache>,
) -> Result<CohomologyJson> {
    if m == 0 || m > 8 {
        return Err(CliError::Validation(format!("modulus exponent {m} outside 1..=8")));
    }
    if maxdeg == 0 {
        return Err(CliError::Validation("max degree must be at least 1".into()));
    }
    let res = resolution(cache, &g.group, &g.hash, m, maxdeg)?;
    let mut degrees = Vec::with_capacity(maxdeg);
    for i in 0..maxdeg {
        let h = cohomology(&res, m, i)?;
        degrees.push(DegreeJson {
            degree: i,
            num_generators: h.num_generators(),
            invariant_factors: h.invariant_factors(),
            log2_order: h.log2_order(),
        });
    }
    Ok(CohomologyJson {
        modulus_exp: m,
        max_degree: maxdeg,
        resolution_ranks: res.ranks().to_vec(),
        dims: degrees.iter().map(|d| d.num_generators).collect(),
        degrees,
    })
}

#[derive(Debug, Serialize)]
pub struct SubgroupJson {
    pub order: usize,
    pub elements: Vec<usize>,
    pub h1_dim: usize,
    pub pi2_dim: usize,
    pub image: SubspaceJson,
}

impl From<&SubgroupTau> for SubgroupJson {
    fn from(t: &SubgroupTau) -> Self {
        SubgroupJson {
            order: t.elements.len(),
            elements: t.elements.clone(),
            h1_dim: t.h1_dim,
            pi2_dim: t.pi2_dim,
            image: (&t.image).into(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CriterionJson {
    pub group_order: usize,
    pub modulus_exp: u32,
    pub max_degree: usize,
    pub h_dims: [usize; 4],
    pub v: SubspaceJson,
    pub w: SubspaceJson,
    pub im_sq1: Option<SubspaceJson>,
    pub im_pi2: Option<SubspaceJson>,
    pub criterion_a: Option<bool>,
    pub criterion_b: Option<bool>,
    pub witness_a: Option<Vec<u8>>,
    pub witness_b: Option<Vec<u8>>,
    pub subgroups: Vec<SubgroupJson>,
}

impl From<&CriterionReport> for CriterionJson {
    fn from(r: &CriterionReport) -> Self {
        CriterionJson {
            group_order: r.group_order,
            modulus_exp: r.modulus_exp,
            max_degree: r.max_degree,
            h_dims: r.h_dims,
            v: (&r.v).into(),
            w: (&r.w).into(),
            im_sq1: r.im_sq1.as_ref().map(Into::into),
            im_pi2: r.im_pi2.as_ref().map(Into::into),
            criterion_a: r.criterion_a,
            criterion_b: r.criterion_b,
            witness_a: r.witness_a.as_ref().map(bits),
            witness_b: r.witness_b.as_ref().map(bits),
            subgroups: r.subgroups.iter().map(Into::into).collect(),
        }
    }
}

pub struct CriterionArgs {
    pub which: Which,
    pub modulus_exp: Option<u32>,
    pub max_degree: usize,
    pub class_cap: usize,
    pub threads: Option<usize>,
}

pub fn cmd_criterion(g: &LoadedGroup, args: &CriterionArgs, cache: Option<&ResolutionCache>) -> Result<CriterionJson> {
    let v2 = g.group.log2_order()?;
    let config = CriterionConfig {
        which: args.which,
        modulus_exp: args.modulus_exp,
        max_degree: args.max_degree,
        class_cap: args.class_cap,
    };
    let k = args.modulus_exp.unwrap_or(v2 + 1);
    let need_k = if args.which.wants_a() { v2 + 1 } else { 2 };
    if k < need_k {
        return Err(Error::ModulusTooSmall { need: need_k, have: k }.into());
    }
    let need_deg = if args.which.wants_a() { 5 } else { 4 };
    if args.max_degree < need_deg {
        return Err(Error::DegreeOutOfRange {
            degree: need_deg,
            max: args.max_degree,
        }
        .into());
    }
    let res = resolution(cache, &g.group, &g.hash, k, args.max_degree)?;
    let ctx = CriterionContext::from_resolution(res, config)?;
    let classes = ctx.subgroup_classes()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = args.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Validation(format!("thread pool: {e}")))?;
    let taus = pool.install(|| {
        classes
            .par_iter()
            .map(|h| ctx.tau_image(h))
            .collect::<std::result::Result<Vec<_>, Error>>()
    })?;
    let report = ctx.finish(taus)?;
    Ok((&report).into())
}

#[derive(Debug, Serialize)]
pub struct PhiJson {
    pub lattice_rank: usize,
    pub invariant_factors: Vec<u64>,
    pub dim: usize,
    pub permutation_rank: usize,
    pub coflasque_rank: usize,
    pub summands: Vec<SummandJson>,
    pub cross_check_dim: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct SummandJson {
    pub subgroup: Vec<usize>,
    pub vector: Vec<i64>,
}

pub fn cmd_phi(g: &LoadedGroup, lattice: &LatticeSpec) -> Result<PhiJson> {
    let n = g.group.order();
    if n > MAX_ALPHA_ORDER {
        return Err(Error::BudgetExceeded {
            what: "group order for Φ",
            value: n,
            limit: MAX_ALPHA_ORDER,
        }
        .into());
    }
    let l = lattice.load(&g.group)?;
    let p = phi(&l)?;
    Ok(PhiJson {
        lattice_rank: l.rank(),
        invariant_factors: p.invariant_factors(),
        dim: p.image.dim,
        permutation_rank: p.resolution.p.rank(),
        coflasque_rank: p.resolution.r.rank(),
        summands: p
            .resolution
            .summands
            .iter()
            .map(|(h, x)| SummandJson {
                subgroup: h.elements().to_vec(),
                vector: x.clone(),
            })
            .collect(),
        cross_check_dim: p.cross_check,
    })
}

#[derive(Debug, Serialize)]
pub struct RhoJson {
    pub rank_rho: usize,
    pub kernel_rank: usize,
    pub kernel_trivial_action: bool,
    pub rank_m: usize,
    pub torsion_free: bool,
    pub smith_checked: bool,
}

impl From<&RhoSummary> for RhoJson {
    fn from(s: &RhoSummary) -> Self {
        RhoJson {
            rank_rho: s.rank_rho,
            kernel_rank: s.kernel_rank,
            kernel_trivial_action: s.kernel_trivial_action,
            rank_m: s.rank_m,
            torsion_free: s.torsion_free,
            smith_checked: s.invariant_factors.is_some(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct WedgeRegularJson {
    pub s1: usize,
    pub s2: usize,
    pub rank: usize,
    pub free_summands: usize,
    pub induced_sign_summands: usize,
}

#[derive(Debug, Serialize)]
pub struct LatticeInfoJson {
    pub rank: usize,
    pub lambda2_rank: usize,
    pub torsion_free: bool,
    /// `None` when the lattice was not materialized (builtin M above the size budget)
    pub is_permutation: Option<bool>,
    pub fixed_rank: Option<usize>,
    pub h1: Option<Vec<u64>>,
    pub rho: Option<RhoJson>,
    pub regular_wedge: WedgeRegularJson,
}

pub fn cmd_lattice_info(g: &LoadedGroup, lattice: &LatticeSpec) -> Result<LatticeInfoJson> {
    let dec = lambda2_regular_decomposition(&g.group)?;
    let regular_wedge = WedgeRegularJson {
        s1: dec.s1.len(),
        s2: dec.s2.len(),
        rank: dec.rank,
        free_summands: dec.s2.len(),
        induced_sign_summands: dec.s1.len(),
    };
    let rho = match lattice {
        LatticeSpec::M => Some(rho_summary(&g.group)?),
        _ => None,
    };
    let materialize = !(matches!(lattice, LatticeSpec::M) && g.group.order() > MAX_MNQ_ORDER);
    let (rank, is_permutation, fixed_rank, h1) = if materialize {
        let l = lattice.load(&g.group)?;
        let whole = Subgroup::whole(&g.group);
        let h1 = match h1_integral(&l, &whole) {
            Ok(h) => Some(h),
            Err(Error::BudgetExceeded { .. }) => None,
            Err(e) => return Err(e.into()),
        };
        (l.rank(), Some(l.is_permutation()), Some(l.fixed_points(&whole)?.rows()), h1)
    } else {
        (rho.as_ref().expect("rho for M").rank_m, None, None, None)
    };
    Ok(LatticeInfoJson {
        rank,
        lambda2_rank: rank * rank.saturating_sub(1) / 2,
        torsion_free: rho.as_ref().is_none_or(|s| s.torsion_free),
        is_permutation,
        fixed_rank,
        h1,
        rho: rho.as_ref().map(Into::into),
        regular_wedge,
    })
}

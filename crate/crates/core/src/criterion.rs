//! The degree-3 criterion for non-vanishing of Φ(G, M).
//!
//! For a subgroup H, `τ_H = Cor_H^G ∘ ∪ ∘ (Id ⊗ π₂) : H¹(H, ℤ/2) ⊗ H²(H, ℤ) →
//! H³(G, ℤ/2)`. `V_G` is the span of all `Im τ_H`. Criterion (a) asks whether
//! `Im(π₂ : H³(G, ℤ) → H³(G, ℤ/2))` escapes `V_G`, criterion (b) whether
//! `Im(Sq¹ : H²(G, ℤ/2) → H³(G, ℤ/2))` does; (b) implies (a) because
//! `Sq¹ = π₂ ∘ β`.

use alloc::vec::Vec;

use crate::cohomology::{bockstein_rep, cohomology, cup_rep, pi2_image, CohClass, CohomologyGroup, Transfer};
use crate::diagonal::{diagonal_approximation, DiagonalApproximation};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{BitVec, Subspace};
use crate::resolution::{minimal_resolution, FreeResolution};
use crate::subgroup::{subgroup_classes, Subgroup, DEFAULT_CLASS_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    A,
    B,
    Both,
}

impl Which {
    pub fn wants_a(self) -> bool {
        matches!(self, Which::A | Which::Both)
    }
    pub fn wants_b(self) -> bool {
        matches!(self, Which::B | Which::Both)
    }
}

#[derive(Clone, Debug)]
pub struct CriterionConfig {
    pub which: Which,
    /// Resolution modulus exponent for G; defaults to `v₂|G| + 1`.
    pub modulus_exp: Option<u32>,
    pub max_degree: usize,
    pub class_cap: usize,
}

impl Default for CriterionConfig {
    fn default() -> Self {
        CriterionConfig {
            which: Which::Both,
            modulus_exp: None,
            max_degree: 5,
            class_cap: DEFAULT_CLASS_CAP,
        }
    }
}

/// `Im τ_H` for one subgroup class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupTau {
    pub elements: Vec<usize>,
    pub h1_dim: usize,
    pub pi2_dim: usize,
    pub image: Subspace,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionReport {
    pub group_order: usize,
    pub modulus_exp: u32,
    pub max_degree: usize,
    /// `dim Hⁱ(G, ℤ/2)` for `i = 0..=3`
    pub h_dims: [usize; 4],
    pub v: Subspace,
    pub w: Subspace,
    pub im_sq1: Option<Subspace>,
    pub im_pi2: Option<Subspace>,
    pub criterion_a: Option<bool>,
    pub criterion_b: Option<bool>,
    pub witness_a: Option<BitVec>,
    pub witness_b: Option<BitVec>,
    pub subgroups: Vec<SubgroupTau>,
}

/// Everything about G needed to evaluate `τ_H` and the criterion.
#[derive(Clone, Debug)]
pub struct CriterionContext {
    group: FiniteGroup,
    config: CriterionConfig,
    k: u32,
    res: FreeResolution,
    res2: FreeResolution,
    diag: DiagonalApproximation,
    h: Vec<CohomologyGroup>,
}

impl CriterionContext {
    pub fn new(g: &FiniteGroup, config: CriterionConfig) -> Result<Self> {
        let v2 = g.log2_order()?;
        let need_k = if config.which.wants_a() { v2 + 1 } else { 2 };
        let k = config.modulus_exp.unwrap_or(v2 + 1);
        if k < need_k {
            return Err(Error::ModulusTooSmall { need: need_k, have: k });
        }
        let need_deg = if config.which.wants_a() { 5 } else { 4 };
        if config.max_degree < need_deg {
            return Err(Error::DegreeOutOfRange {
                degree: need_deg,
                max: config.max_degree,
            });
        }
        let res = minimal_resolution(g, k, config.max_degree)?;
        Self::from_resolution(res, config)
    }

    /// Uses an already computed minimal resolution of G.
    pub fn from_resolution(res: FreeResolution, config: CriterionConfig) -> Result<Self> {
        let g = res.group().clone();
        let res2 = res.reduce(1)?;
        let diag = diagonal_approximation(&res2, 3)?;
        let h = (0..=3).map(|i| cohomology(&res2, 1, i)).collect::<Result<Vec<_>>>()?;
        Ok(CriterionContext {
            group: g,
            k: res.k(),
            config,
            res,
            res2,
            diag,
            h,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }
    pub fn resolution(&self) -> &FreeResolution {
        &self.res
    }
    pub fn config(&self) -> &CriterionConfig {
        &self.config
    }
    /// `Hⁱ(G, ℤ/2)`, `i ≤ 3`.
    pub fn h(&self, i: usize) -> &CohomologyGroup {
        &self.h[i]
    }

    pub fn subgroup_classes(&self) -> Result<Vec<Subgroup>> {
        subgroup_classes(&self.group, self.config.class_cap)
    }

    /// `Im τ_H ⊆ H³(G, ℤ/2)` in canonical coordinates.
    pub fn tau_image(&self, sub: &Subgroup) -> Result<SubgroupTau> {
        let h3 = &self.h[3];
        let hg = sub.as_group(&self.group);
        let kh = hg.log2_order()? + 1;
        let hres = minimal_resolution(&hg, kh, 3)?;
        let h2res = hres.reduce(1)?;
        let h1 = cohomology(&h2res, 1, 1)?;
        let mut out = SubgroupTau {
            elements: sub.elements().to_vec(),
            h1_dim: h1.dim()?,
            pi2_dim: 0,
            image: Subspace::zero(h3.dim()?),
        };
        if out.h1_dim == 0 {
            return Ok(out);
        }
        let pi2 = pi2_image(&hres, 2)?;
        out.pi2_dim = pi2.dim();
        if pi2.dim() == 0 {
            return Ok(out);
        }
        let hh2 = cohomology(&h2res, 1, 2)?;
        let us: Vec<CohClass> = pi2.basis().iter().map(|c| hh2.from_coordinates(c)).collect::<Result<_>>()?;
        let diag = diagonal_approximation(&h2res, 3)?;
        let tr = Transfer::new(&self.res2, sub, &h2res, 3, false)?;
        for x in h1.basis()? {
            for u in &us {
                let c = cup_rep(&diag, &x, u)?;
                let g = tr.corestriction_rep(&c)?;
                out.image.insert(h3.coordinates(&g)?);
            }
        }
        Ok(out)
    }

    /// `W_G`: span of triple cup products of degree-1 basis classes.
    pub fn w_span(&self) -> Result<Subspace> {
        let b1 = self.h[1].basis()?;
        let mut w = Subspace::zero(self.h[3].dim()?);
        for x in &b1 {
            for y in &b1 {
                let xy = self.h[2].class_unchecked(&cup_rep(&self.diag, x, y)?.rep);
                for z in &b1 {
                    w.insert(self.h[3].coordinates(&cup_rep(&self.diag, &xy, z)?)?);
                }
            }
        }
        Ok(w)
    }

    /// `Im(Sq¹ : H² → H³)`.
    pub fn sq1_image(&self) -> Result<Subspace> {
        let mut s = Subspace::zero(self.h[3].dim()?);
        for b in self.h[2].basis()? {
            s.insert(self.h[3].coordinates(&bockstein_rep(&self.res, &b, 1)?)?);
        }
        Ok(s)
    }

    /// `Im(π₂)` in degree 3.
    pub fn pi2_image_deg3(&self) -> Result<Subspace> {
        pi2_image(&self.res, 3)
    }

    pub fn cup(&self, a: &CohClass, b: &CohClass) -> Result<CohClass> {
        let c = cup_rep(&self.diag, a, b)?;
        Ok(self.h[c.degree].class_unchecked(&c.rep))
    }

    /// Assembles the report from per-subgroup images, folded in the order
    /// `(order, element list)` regardless of the order given.
    pub fn finish(&self, mut taus: Vec<SubgroupTau>) -> Result<CriterionReport> {
        taus.sort_by(|a, b| (a.elements.len(), &a.elements).cmp(&(b.elements.len(), &b.elements)));
        let d3 = self.h[3].dim()?;
        let mut v = Subspace::zero(d3);
        for t in &taus {
            v = v.join(&t.image);
        }
        let w = self.w_span()?;
        let escape = |s: &Subspace| s.basis().iter().find(|b| !v.contains(b)).cloned();
        let (im_sq1, witness_b) = if self.config.which.wants_b() {
            let s = self.sq1_image()?;
            let wit = escape(&s);
            (Some(s), wit)
        } else {
            (None, None)
        };
        let (im_pi2, witness_a) = if self.config.which.wants_a() {
            let s = self.pi2_image_deg3()?;
            let wit = escape(&s);
            (Some(s), wit)
        } else {
            (None, None)
        };
        for wit in witness_a.iter().chain(&witness_b) {
            if v.contains(wit) {
                return Err(Error::Invariant("witness lies in V_G".into()));
            }
        }
        let criterion_a = im_pi2.as_ref().map(|_| witness_a.is_some());
        let criterion_b = im_sq1.as_ref().map(|_| witness_b.is_some());
        if criterion_b == Some(true) && criterion_a == Some(false) {
            return Err(Error::Invariant("criterion (b) holds but (a) fails".into()));
        }
        let mut h_dims = [0usize; 4];
        for (i, d) in h_dims.iter_mut().enumerate() {
            *d = self.h[i].dim()?;
        }
        Ok(CriterionReport {
            group_order: self.group.order(),
            modulus_exp: self.k,
            max_degree: self.res.max_degree(),
            h_dims,
            v,
            w,
            im_sq1,
            im_pi2,
            criterion_a,
            criterion_b,
            witness_a,
            witness_b,
            subgroups: taus,
        })
    }
}

/// `V_G` from subgroup class representatives.
pub fn v_subgroup_span(ctx: &CriterionContext) -> Result<Subspace> {
    let mut v = Subspace::zero(ctx.h(3).dim()?);
    for h in ctx.subgroup_classes()? {
        v = v.join(&ctx.tau_image(&h)?.image);
    }
    Ok(v)
}

/// Sequential evaluation of the criterion.
pub fn criterion(g: &FiniteGroup, config: CriterionConfig) -> Result<CriterionReport> {
    let ctx = CriterionContext::new(g, config)?;
    let taus = ctx
        .subgroup_classes()?
        .iter()
        .map(|h| ctx.tau_image(h))
        .collect::<Result<Vec<_>>>()?;
    ctx.finish(taus)
}

//! Cohomology with trivial coefficients ℤ/2^m from a free resolution.
//!
//! Cochains `Cⁱ = Hom(Pᵢ, ℤ/2^m) = (ℤ/2^m)^{rᵢ}` are vectors on free
//! generators; `(δf)ⱼ = Σₖ ε(dᵢ₊₁)ⱼₖ fₖ`. Resolutions over (ℤ/2ᴷ)[G] serve for
//! every `m ≤ K`, since `Hom_{(ℤ/2ᴷ)G}(P, ℤ/2^m)` computes
//! `Ext_{ℤG}(ℤ, ℤ/2^m)` when `P` is free over (ℤ/2ᴷ)[G] and resolves ℤ/2ᴷ.

use alloc::vec;
use alloc::vec::Vec;

use crate::diagonal::DiagonalApproximation;
use crate::error::{Error, Result};
use crate::linalg::modk::{howell, mask_of, HowellRows};
use crate::linalg::{BitVec, ModKMatrix, Subspace};
use crate::resolution::{identity_f0, lift_chain_map, restrict_resolution, FreeResolution};
use crate::subgroup::Subgroup;

/// A cohomology class, held by a cocycle representative. Classes produced
/// through a [`CohomologyGroup`] carry its canonical representative, so
/// equal classes compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CohClass {
    pub degree: usize,
    pub modulus_exp: u32,
    pub rep: Vec<u8>,
}

/// `δ : Cⁱ → Cⁱ⁺¹` as an `rᵢ × rᵢ₊₁` matrix acting on row vectors.
pub fn cochain_differential(res: &FreeResolution, i: usize, m: u32) -> Result<ModKMatrix> {
    if m == 0 || m > res.k() {
        return Err(Error::ModulusTooSmall { need: m, have: res.k() });
    }
    Ok(res.epsilon_boundary(i + 1)?.transpose().reduce_to(m))
}

/// `Hⁱ(G, ℤ/2^m)` with its cocycles and coboundaries.
#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    degree: usize,
    m: u32,
    rank: usize,
    cocycles: ModKMatrix,
    coboundaries: HowellRows,
    /// exponents `e` of the invariant factors `ℤ/2^e`, ascending
    exponents: Vec<u32>,
    /// for `m = 1`: the canonical complement of `Bⁱ` in `Zⁱ`
    complement: Option<(Subspace, Subspace)>,
}

/// `Hⁱ(G, ℤ/2^m)`; needs `res` through degree `i + 1`.
pub fn cohomology(res: &FreeResolution, m: u32, i: usize) -> Result<CohomologyGroup> {
    let delta = cochain_differential(res, i, m)?;
    let rank = res.rank(i);
    let cocycles = delta.kernel_basis();
    let brows = if i == 0 {
        Vec::new()
    } else {
        cochain_differential(res, i - 1, m)?.to_rows()
    };
    let coboundaries = howell(brows.clone(), m, rank, true);
    let log_b: u32 = coboundaries.pivots.iter().map(|p| m - p.valuation).sum();
    // |2^j Zⁱ + Bⁱ| / |Bⁱ| = |2^j H| for j = 0..=m
    let mut o = Vec::with_capacity(m as usize + 1);
    for j in 0..=m {
        let mut rows = brows.clone();
        for z in cocycles.to_rows() {
            rows.push(z.iter().map(|&x| ((x as u16) << j) as u8 & mask_of(m)).collect());
        }
        let h = howell(rows, m, rank, false);
        let log: u32 = h.pivots.iter().map(|p| m - p.valuation).sum();
        o.push(log - log_b);
    }
    let mut exponents = Vec::new();
    for e in 1..=m as usize {
        let ge = o[e - 1] - o[e];
        let gt = if e < m as usize { o[e] - o[e + 1] } else { 0 };
        exponents.extend(core::iter::repeat_n(e as u32, (ge - gt) as usize));
    }
    let complement = (m == 1).then(|| {
        let b = Subspace::spanned_by(rank, brows.iter().map(|r| BitVec::from_residues(r)));
        let c = Subspace::spanned_by(
            rank,
            cocycles.to_rows().iter().map(|z| b.reduce(&BitVec::from_residues(z))),
        );
        (b, c)
    });
    Ok(CohomologyGroup {
        degree: i,
        m,
        rank,
        cocycles,
        coboundaries,
        exponents,
        complement,
    })
}

impl CohomologyGroup {
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn modulus_exp(&self) -> u32 {
        self.m
    }
    /// Rank of the cochain module.
    pub fn cochain_rank(&self) -> usize {
        self.rank
    }
    /// Exponents `e` with `H ≅ ⊕ ℤ/2^e`, ascending.
    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }
    /// Invariant factors `2^e`, ascending.
    pub fn invariant_factors(&self) -> Vec<u64> {
        self.exponents.iter().map(|&e| 1u64 << e).collect()
    }
    pub fn log2_order(&self) -> u32 {
        self.exponents.iter().sum()
    }
    /// Number of cyclic summands; the 𝔽₂-dimension when `m = 1`.
    pub fn num_generators(&self) -> usize {
        self.exponents.len()
    }
    pub fn cocycle_generators(&self) -> &ModKMatrix {
        &self.cocycles
    }

    pub fn is_cocycle(&self, v: &[u8]) -> bool {
        if v.len() != self.rank {
            return false;
        }
        let mask = mask_of(self.m);
        // Zⁱ is the kernel of δ, so it suffices to test membership in its span
        crate::linalg::Solver::new(&self.cocycles).contains(&v.iter().map(|&x| x & mask).collect::<Vec<_>>())
    }

    /// Canonical representative of `v + Bⁱ`.
    pub fn canonical(&self, v: &[u8]) -> Vec<u8> {
        match &self.complement {
            Some((b, _)) => b.reduce(&BitVec::from_residues(v)).to_residues(),
            None => self.coboundaries.reduce(v, self.m),
        }
    }

    /// The class of a cocycle; errors if `v` is not one.
    pub fn class_of(&self, v: &[u8]) -> Result<CohClass> {
        if !self.is_cocycle(v) {
            return Err(Error::IncompatibleOperands("not a cocycle".into()));
        }
        Ok(self.class_unchecked(v))
    }

    /// The class of `v`, assumed to be a cocycle.
    pub fn class_unchecked(&self, v: &[u8]) -> CohClass {
        CohClass {
            degree: self.degree,
            modulus_exp: self.m,
            rep: self.canonical(v),
        }
    }

    fn mod2(&self) -> Result<&(Subspace, Subspace)> {
        self.complement
            .as_ref()
            .ok_or(Error::IncompatibleOperands("coordinates need ℤ/2 coefficients".into()))
    }

    /// 𝔽₂-dimension (for `m = 1`).
    pub fn dim(&self) -> Result<usize> {
        Ok(self.mod2()?.1.dim())
    }

    /// The canonical basis (for `m = 1`).
    pub fn basis(&self) -> Result<Vec<CohClass>> {
        Ok(self
            .mod2()?
            .1
            .basis()
            .iter()
            .map(|v| CohClass {
                degree: self.degree,
                modulus_exp: 1,
                rep: v.to_residues(),
            })
            .collect())
    }

    /// Coordinates of a class in the canonical basis (for `m = 1`).
    pub fn coordinates(&self, c: &CohClass) -> Result<BitVec> {
        let (b, comp) = self.mod2()?;
        if c.degree != self.degree || c.modulus_exp != 1 || c.rep.len() != self.rank {
            return Err(Error::IncompatibleOperands("class from another group".into()));
        }
        comp.coordinates(&b.reduce(&BitVec::from_residues(&c.rep)))
            .ok_or(Error::IncompatibleOperands("not a cocycle".into()))
    }

    /// The class with the given coordinates (for `m = 1`).
    pub fn from_coordinates(&self, x: &BitVec) -> Result<CohClass> {
        let (_, comp) = self.mod2()?;
        let mut v = BitVec::zero(self.rank);
        for i in x.ones() {
            v.xor_assign(&comp.basis()[i]);
        }
        Ok(CohClass {
            degree: self.degree,
            modulus_exp: 1,
            rep: v.to_residues(),
        })
    }

    /// Subspace of coordinate space spanned by classes.
    pub fn span<'a, I: IntoIterator<Item = &'a CohClass>>(&self, classes: I) -> Result<Subspace> {
        let mut s = Subspace::zero(self.dim()?);
        for c in classes {
            s.insert(self.coordinates(c)?);
        }
        Ok(s)
    }
}

/// Cup product representative; `diag` must come from the same resolution
/// (any modulus `≥ m`).
pub fn cup_rep(diag: &DiagonalApproximation, a: &CohClass, b: &CohClass) -> Result<CohClass> {
    if a.modulus_exp != b.modulus_exp {
        return Err(Error::IncompatibleOperands("cup of classes with different coefficients".into()));
    }
    let rep = diag.cup_cochains(a.modulus_exp, a.degree, &a.rep, b.degree, &b.rep)?;
    Ok(CohClass {
        degree: a.degree + b.degree,
        modulus_exp: a.modulus_exp,
        rep,
    })
}

/// Cup product, canonicalised in `target = H^{p+q}`.
pub fn cup(diag: &DiagonalApproximation, a: &CohClass, b: &CohClass, target: &CohomologyGroup) -> Result<CohClass> {
    let c = cup_rep(diag, a, b)?;
    check_target(&c, target)?;
    Ok(target.class_unchecked(&c.rep))
}

fn check_target(c: &CohClass, target: &CohomologyGroup) -> Result<()> {
    if c.degree != target.degree || c.modulus_exp != target.m || c.rep.len() != target.rank {
        return Err(Error::IncompatibleOperands("target group does not match".into()));
    }
    Ok(())
}

/// Bockstein `β_k : Hⁱ(ℤ/2) → Hⁱ⁺¹(ℤ/2^k)` of `0 → ℤ/2^k → ℤ/2^{k+1} → ℤ/2 → 0`
/// on a cocycle representative: lift to ℤ/2^{k+1}, apply δ, divide by 2.
/// Needs `res` over ℤ/2^{k+1} or finer and through degree `i + 1`.
pub fn bockstein_rep(res: &FreeResolution, a: &CohClass, k: u32) -> Result<CohClass> {
    if a.modulus_exp != 1 {
        return Err(Error::IncompatibleOperands("Bockstein takes ℤ/2 classes".into()));
    }
    if res.k() < k + 1 {
        return Err(Error::ModulusTooSmall { need: k + 1, have: res.k() });
    }
    let delta = cochain_differential(res, a.degree, k + 1)?;
    if a.rep.len() != delta.rows() {
        return Err(Error::IncompatibleOperands("cochain length does not match rank".into()));
    }
    let lifted: Vec<u8> = a.rep.iter().map(|&x| x & 1).collect();
    let d = delta.vec_mul(&lifted);
    if d.iter().any(|&x| x & 1 == 1) {
        return Err(Error::IncompatibleOperands("not a mod-2 cocycle".into()));
    }
    Ok(CohClass {
        degree: a.degree + 1,
        modulus_exp: k,
        rep: d.iter().map(|&x| x >> 1).collect(),
    })
}

pub fn bockstein(res: &FreeResolution, a: &CohClass, k: u32, target: &CohomologyGroup) -> Result<CohClass> {
    let c = bockstein_rep(res, a, k)?;
    check_target(&c, target)?;
    Ok(target.class_unchecked(&c.rep))
}

/// `Sq¹ = β₁`.
pub fn sq1(res: &FreeResolution, a: &CohClass, target: &CohomologyGroup) -> Result<CohClass> {
    bockstein(res, a, 1, target)
}

/// The image of `Hⁱ(G, ℤ) → Hⁱ(G, ℤ/2)` as a subspace of coordinates in
/// `cohomology(res, 1, i)`. It is the kernel of `β_{k₀}` with `2^{k₀} = |G|`,
/// since `|G|` kills `Hⁱ⁺¹(G, ℤ)`. Needs `res` over ℤ/2^{k₀+1} through
/// degree `i + 1`.
pub fn pi2_image(res: &FreeResolution, i: usize) -> Result<Subspace> {
    let k0 = res.group().log2_order()?;
    let red = res.reduce(1)?;
    let h = cohomology(&red, 1, i)?;
    let d = h.dim()?;
    if k0 == 0 {
        return Ok(Subspace::full(d));
    }
    if res.k() < k0 + 1 {
        return Err(Error::ModulusTooSmall { need: k0 + 1, have: res.k() });
    }
    let delta = cochain_differential(res, i, k0)?;
    let mut m = ModKMatrix::zero(k0, 0, delta.cols());
    for c in h.basis()? {
        m.push_row(&bockstein_rep(res, &c, k0)?.rep);
    }
    let m = m.vstack(&delta);
    let ker = m.kernel_basis();
    Ok(Subspace::spanned_by(d, ker.to_rows().iter().map(|r| BitVec::from_residues(&r[..d]))))
}

/// Image of `Hⁱ(G, ℤ/2^{k+1}) → Hⁱ(G, ℤ/2)` in coordinates of
/// `cohomology(res.reduce(1), 1, i)`.
pub fn reduction_image(res: &FreeResolution, k1: u32, i: usize) -> Result<Subspace> {
    let hk = cohomology(res, k1, i)?;
    let h = cohomology(&res.reduce(1)?, 1, i)?;
    let mut s = Subspace::zero(h.dim()?);
    for z in hk.cocycle_generators().to_rows() {
        let c = CohClass {
            degree: i,
            modulus_exp: 1,
            rep: z.iter().map(|&x| x & 1).collect(),
        };
        s.insert(h.coordinates(&c)?);
    }
    Ok(s)
}

/// Transfer maps between a resolution `P` over G and a resolution `Q` over a
/// subgroup H (built on [`Subgroup::as_group`]), through comparison maps
/// `φ : Res_H P → Q` and `ψ : Q → Res_H P` over the identity of ℤ/2ᴷ.
#[derive(Clone, Debug)]
pub struct Transfer {
    index: usize,
    g_ranks: Vec<usize>,
    h_ranks: Vec<usize>,
    /// `ε(φᵢ)`: `(rᵢ(G)·[G:H]) × rᵢ(H)`
    phi: Vec<ModKMatrix>,
    /// `ε(ψᵢ)`: `rᵢ(H) × (rᵢ(G)·[G:H])`
    psi: Vec<ModKMatrix>,
}

impl Transfer {
    /// Lifts comparison maps through degree `maxdeg`. Restriction is only
    /// available when `with_restriction` is set.
    pub fn new(
        gres: &FreeResolution,
        h: &Subgroup,
        hres: &FreeResolution,
        maxdeg: usize,
        with_restriction: bool,
    ) -> Result<Transfer> {
        let rp = restrict_resolution(&gres.truncate(maxdeg), h);
        let nh = h.order();
        let phi = lift_chain_map(&rp, hres, identity_f0(&rp, hres), maxdeg)?;
        let psi = if with_restriction {
            let f = lift_chain_map(hres, &rp, identity_f0(hres, &rp), maxdeg)?;
            (0..=maxdeg).map(|i| f.epsilon(nh, i)).collect()
        } else {
            Vec::new()
        };
        Ok(Transfer {
            index: h.index(),
            g_ranks: gres.ranks()[..=maxdeg].to_vec(),
            h_ranks: hres.ranks()[..=maxdeg].to_vec(),
            phi: (0..=maxdeg).map(|i| phi.epsilon(nh, i)).collect(),
            psi,
        })
    }

    pub fn max_degree(&self) -> usize {
        self.phi.len() - 1
    }

    fn need(&self, i: usize) -> Result<()> {
        if i > self.max_degree() {
            return Err(Error::DegreeOutOfRange {
                degree: i,
                max: self.max_degree(),
            });
        }
        Ok(())
    }

    /// Corestriction of a cocycle on H: `cor(c)ⱼ = Σ_t c(φ(s_t eⱼ))`.
    pub fn corestriction_rep(&self, c: &CohClass) -> Result<CohClass> {
        let i = c.degree;
        self.need(i)?;
        if c.rep.len() != self.h_ranks[i] {
            return Err(Error::IncompatibleOperands("cochain length does not match rank".into()));
        }
        let mask = mask_of(c.modulus_exp);
        let m = self.index;
        let t = &self.phi[i];
        let mut rep = vec![0u8; self.g_ranks[i]];
        for (row, slot) in (0..t.rows()).map(|r| (t.row(r), r / m)) {
            let mut acc: u8 = 0;
            for (&x, &y) in row.iter().zip(&c.rep) {
                acc = acc.wrapping_add(x.wrapping_mul(y));
            }
            rep[slot] = rep[slot].wrapping_add(acc);
        }
        rep.iter_mut().for_each(|x| *x &= mask);
        Ok(CohClass {
            degree: i,
            modulus_exp: c.modulus_exp,
            rep,
        })
    }

    /// Restriction of a cocycle on G: `a ∘ ψ`.
    pub fn restriction_rep(&self, a: &CohClass) -> Result<CohClass> {
        let i = a.degree;
        self.need(i)?;
        if self.psi.is_empty() {
            return Err(Error::IncompatibleOperands("restriction maps were not built".into()));
        }
        if a.rep.len() != self.g_ranks[i] {
            return Err(Error::IncompatibleOperands("cochain length does not match rank".into()));
        }
        let mask = mask_of(a.modulus_exp);
        let m = self.index;
        let t = &self.psi[i];
        let rep = (0..t.rows())
            .map(|r| {
                t.row(r)
                    .iter()
                    .enumerate()
                    .fold(0u8, |acc, (col, &x)| acc.wrapping_add(x.wrapping_mul(a.rep[col / m])))
                    & mask
            })
            .collect();
        Ok(CohClass {
            degree: i,
            modulus_exp: a.modulus_exp,
            rep,
        })
    }

    pub fn corestriction(&self, c: &CohClass, target: &CohomologyGroup) -> Result<CohClass> {
        let r = self.corestriction_rep(c)?;
        check_target(&r, target)?;
        Ok(target.class_unchecked(&r.rep))
    }

    pub fn restriction(&self, a: &CohClass, target: &CohomologyGroup) -> Result<CohClass> {
        let r = self.restriction_rep(a)?;
        check_target(&r, target)?;
        Ok(target.class_unchecked(&r.rep))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::builtin;
    use crate::resolution::minimal_resolution;

    fn orders(name: &str, k: u32, m: u32, deg: usize) -> Vec<Vec<u64>> {
        let g = builtin(name).unwrap();
        let r = minimal_resolution(&g, k, deg + 1).unwrap();
        (0..=deg).map(|i| cohomology(&r, m, i).unwrap().invariant_factors()).collect()
    }

    #[test]
    fn cyclic_groups() {
        // Hⁱ(C4, ℤ/4) = ℤ/4 in every degree; Hⁱ(C4, ℤ/8) alternates ℤ/8 / ℤ/4
        assert_eq!(orders("C4", 2, 2, 3), vec![vec![4]; 4]);
        assert_eq!(orders("C4", 3, 3, 3), vec![vec![8], vec![4], vec![4], vec![4]]);
        assert_eq!(orders("C2", 2, 2, 2), vec![vec![4], vec![2], vec![2]]);
    }

    #[test]
    fn klein_four_mod2_dims() {
        let g = builtin("V4").unwrap();
        let r = minimal_resolution(&g, 1, 5).unwrap();
        for i in 0..5 {
            assert_eq!(cohomology(&r, 1, i).unwrap().dim().unwrap(), i + 1);
        }
    }

    #[test]
    fn sq1_on_c4_vanishes_and_on_c2_does_not() {
        for (name, expect) in [("C2", 1u8), ("C4", 0u8)] {
            let g = builtin(name).unwrap();
            let r = minimal_resolution(&g, 2, 3).unwrap();
            let r2 = r.reduce(1).unwrap();
            let h2 = cohomology(&r2, 1, 2).unwrap();
            let x = cohomology(&r2, 1, 1).unwrap().basis().unwrap().remove(0);
            assert_eq!(sq1(&r, &x, &h2).unwrap().rep, vec![expect]);
        }
    }

    #[test]
    fn pi2_of_cyclic() {
        // H¹(C2, ℤ) = 0, H²(C2, ℤ) = ℤ/2 surjects onto H²(C2, ℤ/2)
        let g = builtin("C2").unwrap();
        let r = minimal_resolution(&g, 2, 3).unwrap();
        assert_eq!(pi2_image(&r, 1).unwrap().dim(), 0);
        assert_eq!(pi2_image(&r, 2).unwrap().dim(), 1);
    }

    #[test]
    fn transfer_index_identity() {
        let g = builtin("D4").unwrap();
        let r = minimal_resolution(&g, 1, 3).unwrap();
        for h in crate::subgroup_classes(&g, 100).unwrap() {
            let hg = h.as_group(&g);
            let q = minimal_resolution(&hg, 1, 3).unwrap();
            let t = Transfer::new(&r, &h, &q, 2, true).unwrap();
            for i in 0..=2 {
                let hg_i = cohomology(&r, 1, i).unwrap();
                for a in hg_i.basis().unwrap() {
                    let back = t.corestriction(&t.restriction_rep(&a).unwrap(), &hg_i).unwrap();
                    let want = if h.index() % 2 == 0 { vec![0; a.rep.len()] } else { a.rep.clone() };
                    assert_eq!(back.rep, want);
                }
            }
        }
    }
}

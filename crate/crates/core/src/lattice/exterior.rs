//! `Λ²` and `Γ²` of a lattice and the sequences built from them.

use alloc::vec;
use alloc::vec::Vec;

use super::glattice::{GLattice, LatticeSES};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{BitVec, IntMatrix};

/// Position of `eₚ∧e_q` (`p < q`) in the standard basis of `Λ²ℤʳ`.
pub fn pair_index(r: usize, p: usize, q: usize) -> usize {
    debug_assert!(p < q && q < r);
    p * r - p * (p + 1) / 2 + q - p - 1
}

/// All pairs `p < q` in basis order.
pub fn pairs(r: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(r * r.saturating_sub(1) / 2);
    for p in 0..r {
        for q in p + 1..r {
            out.push((p, q));
        }
    }
    out
}

/// `Λ²F` for an integer matrix `F : ℤᶜ → ℤʳ`, in the standard wedge bases.
pub fn wedge_matrix(f: &IntMatrix) -> Result<IntMatrix> {
    let (r, c) = (f.rows(), f.cols());
    let rp = pairs(r);
    let cp = pairs(c);
    let mut out = IntMatrix::zero(rp.len(), cp.len());
    for (j, &(p, q)) in cp.iter().enumerate() {
        for (i, &(a, b)) in rp.iter().enumerate() {
            let x = f
                .get(a, p)
                .checked_mul(f.get(b, q))
                .and_then(|u| f.get(b, p).checked_mul(f.get(a, q)).and_then(|v| u.checked_sub(v)))
                .ok_or(Error::Overflow)?;
            if x != 0 {
                out.set(i, j, x);
            }
        }
    }
    Ok(out)
}

/// `x∧y` in the standard basis.
pub fn wedge(x: &[i64], y: &[i64]) -> Vec<i64> {
    let r = x.len();
    let mut out = vec![0i64; r * r.saturating_sub(1) / 2];
    for (i, (p, q)) in pairs(r).into_iter().enumerate() {
        out[i] = x[p] * y[q] - x[q] * y[p];
    }
    out
}

/// `Λ²L` with the induced action.
pub fn lambda2(l: &GLattice) -> Result<GLattice> {
    let g = l.group();
    let r = l.rank();
    if let Some(perm) = l.permutation_action() {
        // signed permutation matrices
        let ps = pairs(r);
        let mats = perm
            .iter()
            .map(|p| {
                let mut m = IntMatrix::zero(ps.len(), ps.len());
                for (j, &(a, b)) in ps.iter().enumerate() {
                    let (x, y) = (p[a], p[b]);
                    if x < y {
                        m.set(pair_index(r, x, y), j, 1);
                    } else {
                        m.set(pair_index(r, y, x), j, -1);
                    }
                }
                m
            })
            .collect();
        return Ok(GLattice::from_matrices_unchecked(g, mats));
    }
    let mats = l.matrices().iter().map(wedge_matrix).collect::<Result<Vec<_>>>()?;
    Ok(GLattice::from_matrices_unchecked(g, mats))
}

/// An element of `Γ²L = ℤ^{p<q} ⊕ (ℤ/2)ʳ`: coefficients of `eₚ⋆e_q`
/// (`p < q`) and of `eₚ⋆eₚ`, which has order 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaElement {
    pub free: Vec<i64>,
    pub torsion: BitVec,
}

impl GammaElement {
    pub fn zero(r: usize) -> Self {
        GammaElement {
            free: vec![0; r * r.saturating_sub(1) / 2],
            torsion: BitVec::zero(r),
        }
    }

    fn add_scaled(&mut self, c: i64, other: &GammaElement) {
        for (a, b) in self.free.iter_mut().zip(&other.free) {
            *a += c * b;
        }
        if c & 1 == 1 {
            self.torsion.xor_assign(&other.torsion);
        }
    }
}

/// The sequence `0 → L/2 → Γ²L → Λ²L → 0` with `ι(x) = x⋆x` and
/// `π(x⋆y) = x∧y`.
#[derive(Clone, Debug)]
pub struct ExteriorSequence {
    pub lattice: GLattice,
    pub lambda2: GLattice,
}

impl ExteriorSequence {
    pub fn new(l: &GLattice) -> Result<Self> {
        Ok(ExteriorSequence {
            lattice: l.clone(),
            lambda2: lambda2(l)?,
        })
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    /// `x⋆y` for `x, y ∈ L`.
    pub fn star(&self, x: &[i64], y: &[i64]) -> GammaElement {
        let r = self.rank();
        let mut out = GammaElement::zero(r);
        for (i, (p, q)) in pairs(r).into_iter().enumerate() {
            out.free[i] = x[p] * y[q] - x[q] * y[p];
        }
        for a in 0..r {
            if (x[a] * y[a]) & 1 == 1 {
                out.torsion.flip(a);
            }
        }
        out
    }

    /// `g·z` in `Γ²L`.
    pub fn act(&self, g: usize, z: &GammaElement) -> GammaElement {
        let r = self.rank();
        let a = self.lattice.matrix(g);
        let col = |j: usize| (0..r).map(|i| a.get(i, j)).collect::<Vec<i64>>();
        let mut out = GammaElement::zero(r);
        for (i, (p, q)) in pairs(r).into_iter().enumerate() {
            if z.free[i] != 0 {
                let img = self.star(&col(p), &col(q));
                out.add_scaled(z.free[i], &img);
            }
        }
        for p in z.torsion.ones() {
            let cp = col(p);
            out.add_scaled(1, &self.iota(&cp));
        }
        out
    }

    /// `ι(x + 2L) = x⋆x`.
    pub fn iota(&self, x: &[i64]) -> GammaElement {
        let mut out = GammaElement::zero(self.rank());
        for (a, &v) in x.iter().enumerate() {
            if v & 1 == 1 {
                out.torsion.set(a, true);
            }
        }
        out
    }

    pub fn pi(&self, z: &GammaElement) -> Vec<i64> {
        z.free.clone()
    }

    /// The section `eₚ∧e_q ↦ eₚ⋆e_q` of `π` attached to the basis ordering
    /// `order` (a permutation of `0..r`): pairs are oriented by their
    /// position in `order`.
    pub fn section(&self, order: &[usize], w: &[i64]) -> GammaElement {
        let r = self.rank();
        let mut pos = vec![0usize; r];
        for (i, &b) in order.iter().enumerate() {
            pos[b] = i;
        }
        let mut out = GammaElement::zero(r);
        for (i, (p, q)) in pairs(r).into_iter().enumerate() {
            if w[i] == 0 {
                continue;
            }
            // eₚ∧e_q = −e_q∧eₚ and e_q⋆eₚ = −eₚ⋆e_q in Γ²
            let (x, y, sign) = if pos[p] < pos[q] { (p, q, 1) } else { (q, p, -1) };
            let mut ex = vec![0i64; r];
            let mut ey = vec![0i64; r];
            ex[x] = 1;
            ey[y] = 1;
            out.add_scaled(sign * w[i], &self.star(&ex, &ey));
        }
        out
    }

    /// The retraction `Γ²L → L/2` of a permutation basis: `eᵢ⋆eⱼ ↦ 0`
    /// (`i ≠ j`), `eᵢ⋆eᵢ ↦ eᵢ`.
    pub fn splitting(&self, z: &GammaElement) -> BitVec {
        z.torsion.clone()
    }

    /// Exactness and equivariance of `ι` and `π` on basis elements.
    pub fn verify(&self) -> Result<()> {
        let r = self.rank();
        let n = self.lattice.group().order();
        let bad = |m: &str| Err(Error::Invariant(alloc::format!("exterior sequence: {m}")));
        for a in 0..r {
            let mut e = vec![0i64; r];
            e[a] = 1;
            let z = self.iota(&e);
            if !self.pi(&z).iter().all(|&x| x == 0) || z.torsion != BitVec::unit(r, a) {
                return bad("ι is not injective into ker π");
            }
            for g in 1..n {
                let ge: Vec<i64> = (0..r).map(|i| self.lattice.matrix(g).get(i, a)).collect();
                if self.act(g, &z) != self.iota(&ge) {
                    return bad("ι is not equivariant");
                }
            }
        }
        let id: Vec<usize> = (0..r).collect();
        for (i, _) in pairs(r).into_iter().enumerate() {
            let mut w = vec![0i64; r * (r - 1) / 2];
            w[i] = 1;
            let z = self.section(&id, &w);
            if self.pi(&z) != w {
                return bad("section is not a section of π");
            }
            for g in 1..n {
                if self.pi(&self.act(g, &z)) != self.lambda2.matrix(g).apply(&w) {
                    return bad("π is not equivariant");
                }
            }
        }
        Ok(())
    }

    /// Whether the section for `order` commutes with the action; this holds
    /// for permutation lattices.
    pub fn section_is_equivariant(&self, order: &[usize]) -> bool {
        let r = self.rank();
        let n = self.lattice.group().order();
        (0..r * r.saturating_sub(1) / 2).all(|i| {
            let mut w = vec![0i64; r * (r - 1) / 2];
            w[i] = 1;
            let z = self.section(order, &w);
            (1..n).all(|g| self.act(g, &z) == self.section(order, &self.lambda2.matrix(g).apply(&w)))
        })
    }

    /// Whether the retraction splits `ι` and commutes with the action.
    pub fn splitting_is_equivariant(&self) -> bool {
        let r = self.rank();
        let n = self.lattice.group().order();
        let mod2 = |v: &[i64]| BitVec::from_residues(&v.iter().map(|&x| (x & 1) as u8).collect::<Vec<u8>>());
        let mut gens: Vec<GammaElement> = Vec::new();
        for (i, _) in pairs(r).into_iter().enumerate() {
            let mut z = GammaElement::zero(r);
            z.free[i] = 1;
            gens.push(z);
        }
        for a in 0..r {
            let mut z = GammaElement::zero(r);
            z.torsion.set(a, true);
            gens.push(z);
        }
        gens.iter().all(|z| {
            (1..n).all(|g| {
                let lhs = self.splitting(&self.act(g, z));
                let s = self.splitting(z);
                let sv: Vec<i64> = s.to_residues().iter().map(|&x| x as i64).collect();
                lhs == mod2(&self.lattice.matrix(g).apply(&sv))
            })
        })
    }
}

/// From `0 → ℤ → X → Y → 0`, the sequence `0 → Y → Λ²X → Λ²Y → 0` with
/// `η(y) = x∧σ`, `σ` the image of 1 and `x` any preimage of `y`.
pub fn exterior_sequence(ses: &LatticeSES) -> Result<LatticeSES> {
    let g = ses.a.group();
    if ses.a.rank() != 1 || (0..g.order()).any(|h| ses.a.matrix(h).get(0, 0) != 1) {
        return Err(Error::NotRankOneKernel);
    }
    ses.verify()?;
    let sigma: Vec<i64> = (0..ses.b.rank()).map(|i| ses.f.get(i, 0)).collect();
    // preimages: x · pᵀ = y
    let pt = ses.p.transpose().smith()?;
    let ry = ses.c.rank();
    let lx = lambda2(&ses.b)?;
    let ly = lambda2(&ses.c)?;
    let mut eta = IntMatrix::zero(lx.rank(), ry);
    for j in 0..ry {
        let mut y = vec![0i64; ry];
        y[j] = 1;
        let x = crate::linalg::int::solve_left_with(&pt, &y)
            .ok_or_else(|| Error::Invariant("surjection has no preimage".into()))?;
        for (i, v) in wedge(&x, &sigma).into_iter().enumerate() {
            eta.set(i, j, v);
        }
    }
    let out = LatticeSES {
        a: ses.c.clone(),
        b: lx,
        c: ly,
        f: eta,
        p: wedge_matrix(&ses.p)?,
    };
    out.verify()?;
    Ok(out)
}

/// Kind of a summand `M_g` of `Λ²ℤ[G]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SummandKind {
    /// `g² ≠ e`: `M_g ≅ ℤ[G]`.
    Free,
    /// `g² = e`: `M_g ≅ Ind from ⟨g⟩ of ℤ⁻`.
    InducedSign,
}

/// `M_g`, the sublattice spanned by the orbit of `g∧e`.
#[derive(Clone, Debug)]
pub struct Summand {
    pub generator: usize,
    pub kind: SummandKind,
    pub rank: usize,
    /// `(pair index, sign)` of `hg∧h` for each `h`
    pub orbit: Vec<(usize, i64)>,
}

#[derive(Clone, Debug)]
pub struct Lambda2Decomposition {
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
    pub r: usize,
    pub rank: usize,
    pub summands: Vec<Summand>,
}

/// `Λ²ℤ[G] = ⊕_{g ∈ S₁ ∪ S₂} M_g`, with `S₁` the involutions and `S₂` one
/// element from each pair `{g, g⁻¹}` with `g² ≠ e`. The orbits are checked
/// to partition the wedge basis up to sign.
pub fn lambda2_regular_decomposition(g: &FiniteGroup) -> Result<Lambda2Decomposition> {
    let n = g.order();
    let mut s1 = Vec::new();
    let mut s2 = Vec::new();
    for x in 1..n {
        let xi = g.inv(x);
        if xi == x {
            s1.push(x);
        } else if x < xi {
            s2.push(x);
        }
    }
    let total = n * (n - 1) / 2;
    let mut owner = vec![usize::MAX; total];
    let mut summands = Vec::new();
    for &x in s1.iter().chain(&s2) {
        let mut orbit = Vec::with_capacity(n);
        let mut seen = Vec::new();
        for h in 0..n {
            let (a, b) = (g.mul(h, x), h);
            let (idx, sign) = if a < b { (pair_index(n, a, b), 1) } else { (pair_index(n, b, a), -1) };
            orbit.push((idx, sign));
            if !seen.contains(&idx) {
                seen.push(idx);
            }
        }
        for &idx in &seen {
            if owner[idx] != usize::MAX && owner[idx] != x {
                return Err(Error::Invariant("wedge orbits overlap".into()));
            }
            owner[idx] = x;
        }
        let kind = if g.inv(x) == x { SummandKind::InducedSign } else { SummandKind::Free };
        let expect = if kind == SummandKind::Free { n } else { n / 2 };
        if seen.len() != expect {
            return Err(Error::Invariant("wedge orbit has unexpected size".into()));
        }
        summands.push(Summand {
            generator: x,
            kind,
            rank: seen.len(),
            orbit,
        });
    }
    if owner.contains(&usize::MAX) {
        return Err(Error::Invariant("wedge orbits do not cover Λ²ℤ[G]".into()));
    }
    let rank = s1.len() * (n / 2) + s2.len() * n;
    if rank != total {
        return Err(Error::Invariant("rank identity fails".into()));
    }
    Ok(Lambda2Decomposition {
        r: s2.len(),
        s1,
        s2,
        rank,
        summands,
    })
}

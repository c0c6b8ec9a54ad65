//! G-lattices: ℤ-free modules with a G-action by integer matrices.
//!
//! Vectors are columns: `g·x = A_g x`, so `A_{gh} = A_g A_h`. A map of
//! lattices `L → L'` is a `rank L' × rank L` matrix `F` with
//! `F A_g = A'_g F`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::modk::howell;
use crate::linalg::{IntMatrix, ModKMatrix};
use crate::subgroup::{subgroup_classes, Subgroup};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GLattice {
    group: FiniteGroup,
    rank: usize,
    /// action matrix of every element
    mats: Vec<IntMatrix>,
    /// for permutation lattices, `perm[g][i]` is the index of `g·eᵢ`
    perm: Option<Vec<Vec<usize>>>,
}

impl GLattice {
    /// Lattice from matrices of some elements; the action of every element
    /// is derived from words in them and the group law is verified.
    pub fn from_generators(group: &FiniteGroup, rank: usize, gens: &[(usize, IntMatrix)]) -> Result<Self> {
        let n = group.order();
        for (g, m) in gens {
            if *g >= n || m.rows() != rank || m.cols() != rank {
                return Err(Error::InvalidLattice(format!("bad generator matrix for element {g}")));
            }
        }
        let mut mats: Vec<Option<IntMatrix>> = vec![None; n];
        mats[0] = Some(IntMatrix::identity(rank));
        let mut queue = vec![0usize];
        while let Some(x) = queue.pop() {
            for (g, m) in gens {
                let y = group.mul(*g, x);
                let prod = m.checked_mul(mats[x].as_ref().expect("visited"))?;
                match &mats[y] {
                    None => {
                        mats[y] = Some(prod);
                        queue.push(y);
                    }
                    Some(existing) => {
                        if *existing != prod {
                            return Err(Error::InvalidLattice("action does not respect the group law".into()));
                        }
                    }
                }
            }
        }
        let mats: Vec<IntMatrix> = mats
            .into_iter()
            .map(|m| m.ok_or_else(|| Error::InvalidLattice("generators do not generate the group".into())))
            .collect::<Result<_>>()?;
        let l = GLattice {
            group: group.clone(),
            rank,
            mats,
            perm: None,
        };
        l.verify()?;
        Ok(l)
    }

    /// Permutation lattice from an action on `0..rank`.
    pub fn permutation(group: &FiniteGroup, rank: usize, act: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let n = group.order();
        let perm: Vec<Vec<usize>> = (0..n).map(|g| (0..rank).map(|i| act(g, i)).collect()).collect();
        let mats = perm
            .iter()
            .map(|p| {
                let mut m = IntMatrix::zero(rank, rank);
                for (i, &j) in p.iter().enumerate() {
                    m.set(j, i, 1);
                }
                m
            })
            .collect();
        let l = GLattice {
            group: group.clone(),
            rank,
            mats,
            perm: Some(perm),
        };
        l.verify()?;
        Ok(l)
    }

    /// All element matrices given directly (checked).
    pub fn from_matrices(group: &FiniteGroup, mats: Vec<IntMatrix>) -> Result<Self> {
        let rank = mats.first().map_or(0, |m| m.rows());
        if mats.len() != group.order() {
            return Err(Error::InvalidLattice("one matrix per element required".into()));
        }
        let l = GLattice {
            group: group.clone(),
            rank,
            mats,
            perm: None,
        };
        l.verify()?;
        Ok(l)
    }

    /// Trusted constructor for actions induced by construction.
    pub(crate) fn from_matrices_unchecked(group: &FiniteGroup, mats: Vec<IntMatrix>) -> Self {
        let rank = mats.first().map_or(0, |m| m.rows());
        GLattice {
            group: group.clone(),
            rank,
            mats,
            perm: None,
        }
    }

    pub fn trivial(group: &FiniteGroup, rank: usize) -> Self {
        Self::permutation(group, rank, |_, i| i).expect("trivial action")
    }

    /// `ℤ[G]` with `g·e_h = e_{gh}`.
    pub fn regular(group: &FiniteGroup) -> Self {
        Self::permutation(group, group.order(), |g, h| group.mul(g, h)).expect("regular action")
    }

    /// `ℤ[G/H]` on the left cosets `tH`, in the order of `coset_reps`.
    pub fn coset_lattice(group: &FiniteGroup, h: &Subgroup) -> Self {
        let reps = h.coset_reps();
        let mut label = vec![0usize; group.order()];
        for (i, &t) in reps.iter().enumerate() {
            for &x in h.elements() {
                label[group.mul(t, x)] = i;
            }
        }
        Self::permutation(group, reps.len(), |g, i| label[group.mul(g, reps[i])]).expect("coset action")
    }

    /// Rank-one lattice on which `g` acts by `chi(g) ∈ {±1}`.
    pub fn character(group: &FiniteGroup, chi: impl Fn(usize) -> i64) -> Result<Self> {
        let mats = (0..group.order()).map(|g| IntMatrix::from_rows(1, &[vec![chi(g)]])).collect();
        Self::from_matrices(group, mats)
    }

    /// The sign lattice `ℤ⁻` of the first index-2 subgroup (in the order of
    /// [`subgroup_classes`]); elements outside it act by −1.
    pub fn sign(group: &FiniteGroup) -> Result<Self> {
        let classes = subgroup_classes(group, usize::MAX)?;
        let h = classes
            .iter()
            .find(|h| h.index() == 2)
            .ok_or_else(|| Error::InvalidLattice("group has no subgroup of index 2".into()))?;
        Self::character(group, |g| if h.contains(g) { 1 } else { -1 })
    }

    fn verify(&self) -> Result<()> {
        let n = self.group.order();
        if self.mats.iter().any(|m| m.rows() != self.rank || m.cols() != self.rank) {
            return Err(Error::InvalidLattice("action matrix has wrong shape".into()));
        }
        if self.mats[0] != IntMatrix::identity(self.rank) {
            return Err(Error::InvalidLattice("identity does not act trivially".into()));
        }
        for g in 0..n {
            for h in 0..n {
                if self.mats[g].checked_mul(&self.mats[h])? != self.mats[self.group.mul(g, h)] {
                    return Err(Error::InvalidLattice(format!("A_{g} A_{h} ≠ A_(gh)")));
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn matrix(&self, g: usize) -> &IntMatrix {
        &self.mats[g]
    }
    pub fn matrices(&self) -> &[IntMatrix] {
        &self.mats
    }
    pub fn is_permutation(&self) -> bool {
        self.perm.is_some()
    }
    pub fn permutation_action(&self) -> Option<&[Vec<usize>]> {
        self.perm.as_deref()
    }

    pub fn direct_sum(&self, other: &GLattice) -> Result<GLattice> {
        if self.group != other.group {
            return Err(Error::IncompatibleOperands("lattices over different groups".into()));
        }
        let mats = self.mats.iter().zip(&other.mats).map(|(a, b)| a.direct_sum(b)).collect();
        let perm = match (&self.perm, &other.perm) {
            (Some(p), Some(q)) => Some(
                p.iter()
                    .zip(q)
                    .map(|(a, b)| a.iter().copied().chain(b.iter().map(|&j| j + self.rank)).collect())
                    .collect(),
            ),
            _ => None,
        };
        Ok(GLattice {
            group: self.group.clone(),
            rank: self.rank + other.rank,
            mats,
            perm,
        })
    }

    /// The same module viewed over a subgroup H (numbered as in
    /// [`Subgroup::as_group`]).
    pub fn restrict(&self, h: &Subgroup) -> GLattice {
        let hg = h.as_group(&self.group);
        GLattice {
            group: hg,
            rank: self.rank,
            mats: h.elements().iter().map(|&x| self.mats[x].clone()).collect(),
            perm: self
                .perm
                .as_ref()
                .map(|p| h.elements().iter().map(|&x| p[x].clone()).collect()),
        }
    }

    /// `[A_{g₁} − I; A_{g₂} − I; …]` over the given elements.
    fn stacked_minus_identity(&self, elems: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zero(0, self.rank);
        for &g in elems {
            let m = &self.mats[g];
            for i in 0..self.rank {
                let mut r = m.row(i).to_vec();
                r[i] -= 1;
                out.push_row(&r);
            }
        }
        out
    }

    /// Basis (rows) of the fixed sublattice `L^H`; it is saturated.
    pub fn fixed_points(&self, h: &Subgroup) -> Result<IntMatrix> {
        let gens = small_gens(&self.group, h);
        if gens.is_empty() {
            return Ok(IntMatrix::identity(self.rank));
        }
        self.stacked_minus_identity(&gens).right_kernel()
    }

    /// Checks `F A_g = A'_g F` for all g.
    pub fn check_map(&self, target: &GLattice, f: &IntMatrix) -> Result<()> {
        if f.rows() != target.rank || f.cols() != self.rank {
            return Err(Error::InvalidLattice("map has wrong shape".into()));
        }
        for g in 0..self.group.order() {
            if f.checked_mul(&self.mats[g])? != target.mats[g].checked_mul(f)? {
                return Err(Error::InvalidLattice(format!("map is not equivariant at element {g}")));
            }
        }
        Ok(())
    }

    /// The sublattice with basis `rows` (must be G-stable and saturated is
    /// not required), with its induced action.
    pub fn sublattice(&self, rows: &IntMatrix) -> Result<GLattice> {
        let s = rows.smith()?;
        if s.rank() != rows.rows() {
            return Err(Error::InvalidLattice("sublattice basis is not independent".into()));
        }
        let mut mats = Vec::with_capacity(self.mats.len());
        for m in &self.mats {
            let mut a = IntMatrix::zero(rows.rows(), rows.rows());
            for i in 0..rows.rows() {
                let img = m.apply(rows.row(i));
                let c = crate::linalg::int::solve_left_with(&s, &img)
                    .ok_or_else(|| Error::InvalidLattice("sublattice is not G-stable".into()))?;
                for (j, &x) in c.iter().enumerate() {
                    a.set(j, i, x);
                }
            }
            mats.push(a);
        }
        GLattice::from_matrices(&self.group, mats)
    }

    /// The action reduced mod 2^k, one (ℤ/2^k)-matrix per element.
    pub fn reduced_action(&self, k: u32) -> Vec<ModKMatrix> {
        let mask = (1i64 << k) - 1;
        self.mats
            .iter()
            .map(|m| {
                let mut r = ModKMatrix::zero(k, self.rank, self.rank);
                for i in 0..self.rank {
                    for j in 0..self.rank {
                        r.set(i, j, (m.get(i, j) & mask) as u8);
                    }
                }
                r
            })
            .collect()
    }
}

/// A generating set of H (parent numbering).
pub(crate) fn small_gens(g: &FiniteGroup, h: &Subgroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = vec![0usize];
    for &x in h.elements().iter().rev() {
        if span.binary_search(&x).is_err() {
            gens.push(x);
            span = g.closure(&gens);
        }
    }
    gens
}

/// `0 → A → B → C → 0` with `f : A → B`, `p : B → C`.
#[derive(Clone, Debug)]
pub struct LatticeSES {
    pub a: GLattice,
    pub b: GLattice,
    pub c: GLattice,
    pub f: IntMatrix,
    pub p: IntMatrix,
}

impl LatticeSES {
    /// Composite zero, injectivity with saturated image, surjectivity, rank
    /// additivity and equivariance, all exactly.
    pub fn verify(&self) -> Result<()> {
        self.a.check_map(&self.b, &self.f)?;
        self.b.check_map(&self.c, &self.p)?;
        if !self.p.checked_mul(&self.f)?.is_zero() {
            return Err(Error::InvalidLattice("composite is not zero".into()));
        }
        if self.b.rank != self.a.rank + self.c.rank {
            return Err(Error::InvalidLattice("ranks are not additive".into()));
        }
        let ff = self.f.invariant_factors()?;
        if ff.len() != self.a.rank || ff.iter().any(|&d| d != 1) {
            return Err(Error::InvalidLattice("first map is not a split injection over ℤ".into()));
        }
        let pf = self.p.invariant_factors()?;
        if pf.len() != self.c.rank || pf.iter().any(|&d| d != 1) {
            return Err(Error::InvalidLattice("second map is not surjective".into()));
        }
        Ok(())
    }
}

/// Invariant factors of `H¹(H, L)` for a 2-group H.
///
/// With `2^k = |H|` killing `H¹(H, L)`, the sequence `0 → L → L → L/2^k → 0`
/// gives `H¹(H, L) ≅ (L/2^k)^H / (L^H mod 2^k)`.
pub fn h1_integral(l: &GLattice, h: &Subgroup) -> Result<Vec<u64>> {
    let k = h.as_group(l.group()).log2_order()?;
    if k == 0 || l.rank == 0 {
        return Ok(Vec::new());
    }
    if k > 8 {
        return Err(Error::BudgetExceeded {
            what: "subgroup order for H¹",
            value: h.order(),
            limit: 256,
        });
    }
    let gens = small_gens(l.group(), h);
    let r = l.rank;
    let mask = (1i64 << k) - 1;
    // (L/2^k)^H = {x : x · [(A_g − I)ᵀ …] = 0}
    let st = l.stacked_minus_identity(&gens).transpose();
    let mut m = ModKMatrix::zero(k, r, st.cols());
    for i in 0..r {
        for j in 0..st.cols() {
            m.set(i, j, (st.get(i, j) & mask) as u8);
        }
    }
    let fixed_mod = m.kernel_basis();
    let fixed = l.fixed_points(h)?;
    let to_u8 = |row: &[i64]| row.iter().map(|&x| (x & mask) as u8).collect::<Vec<u8>>();
    let brows: Vec<Vec<u8>> = fixed.to_rows().iter().map(|r| to_u8(r)).collect();
    let log_b: u32 = howell(brows.clone(), k, r, false).pivots.iter().map(|p| k - p.valuation).sum();
    let mut o = Vec::new();
    for j in 0..=k {
        let mut rows = brows.clone();
        for z in fixed_mod.to_rows() {
            rows.push(z.iter().map(|&x| ((x as u16) << j) as u8 & mask as u8).collect());
        }
        let log: u32 = howell(rows, k, r, false).pivots.iter().map(|p| k - p.valuation).sum();
        o.push(log - log_b);
    }
    let mut out = Vec::new();
    for e in 1..=k as usize {
        let ge = o[e - 1] - o[e];
        let gt = if e < k as usize { o[e] - o[e + 1] } else { 0 };
        out.extend(core::iter::repeat_n(1u64 << e, (ge - gt) as usize));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::builtin;

    #[test]
    fn regular_and_sign() {
        let g = builtin("C2").unwrap();
        let r = GLattice::regular(&g);
        assert!(r.is_permutation());
        assert_eq!(r.matrix(1).to_rows(), vec![vec![0, 1], vec![1, 0]]);
        let s = GLattice::sign(&g).unwrap();
        assert_eq!(s.matrix(1).get(0, 0), -1);
        assert!(GLattice::sign(&builtin("trivial").unwrap()).is_err());
    }

    #[test]
    fn from_generators_rejects_bad_action() {
        let g = builtin("C2").unwrap();
        let bad = IntMatrix::from_rows(1, &[vec![2]]);
        assert!(GLattice::from_generators(&g, 1, &[(1, bad)]).is_err());
        let ok = IntMatrix::from_rows(1, &[vec![-1]]);
        assert!(GLattice::from_generators(&g, 1, &[(1, ok)]).is_ok());
    }

    #[test]
    fn h1_examples() {
        let g = builtin("C2").unwrap();
        let whole = Subgroup::whole(&g);
        assert_eq!(h1_integral(&GLattice::sign(&g).unwrap(), &whole).unwrap(), vec![2]);
        assert!(h1_integral(&GLattice::trivial(&g, 3), &whole).unwrap().is_empty());
        let d4 = builtin("D4").unwrap();
        let reg = GLattice::regular(&d4);
        for h in subgroup_classes(&d4, 100).unwrap() {
            assert!(h1_integral(&reg, &h).unwrap().is_empty());
        }
    }

    #[test]
    fn fixed_points_of_regular() {
        let g = builtin("C4").unwrap();
        let reg = GLattice::regular(&g);
        let f = reg.fixed_points(&Subgroup::whole(&g)).unwrap();
        assert_eq!(f.rows(), 1);
        assert!(f.row(0).iter().all(|&x| x == f.row(0)[0]));
    }
}

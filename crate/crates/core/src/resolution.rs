//! Free resolutions of the trivial module over (ℤ/2ᴷ)[G].
//!
//! A free module `P = (ℤ/2ᴷ)[G]^r` is stored in coordinates indexed
//! `(j, h) ↦ j·n + h`, the coefficient of `h·eⱼ`. G acts on the left:
//! `(g·v)[(j, gh)] = v[(j, h)]`. A boundary `dᵢ : Pᵢ → Pᵢ₋₁` is stored by
//! the images of the `rᵢ` free generators, one row each; the
//! (ℤ/2ᴷ)-linear map on all of `Pᵢ` is recovered by equivariance.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::modk::{howell, mask_of};
use crate::linalg::{BitMatrix, ModKMatrix, Solver};
use crate::subgroup::Subgroup;

/// A free resolution `… → P₁ → P₀ → ℤ/2ᴷ → 0` (or a truncation of one),
/// computed through degree `max_degree()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeResolution {
    group: FiniteGroup,
    k: u32,
    ranks: Vec<usize>,
    /// `boundaries[i − 1]` holds `dᵢ`, of shape `rᵢ × (rᵢ₋₁·n)`.
    boundaries: Vec<ModKMatrix>,
}

/// `Σ v[(j, h)] · h·rows[j]`: applies the equivariant map whose generator
/// images are `rows` to a vector in coordinates of the source module.
pub fn apply_equivariant(g: &FiniteGroup, rows: &ModKMatrix, v: &[u8]) -> Vec<u8> {
    let n = g.order();
    let tgt = rows.cols();
    debug_assert_eq!(v.len(), rows.rows() * n);
    let mask = rows.mask();
    let tr = tgt / n.max(1);
    let mut out = vec![0u8; tgt];
    for (idx, &c) in v.iter().enumerate() {
        if c & mask == 0 {
            continue;
        }
        let (j, h) = (idx / n, idx % n);
        let row = rows.row(j);
        for k in 0..tr {
            let base = k * n;
            for x in 0..n {
                let e = row[base + x];
                if e != 0 {
                    let o = &mut out[base + g.mul(h, x)];
                    *o = o.wrapping_add(c.wrapping_mul(e)) & mask;
                }
            }
        }
    }
    out
}

/// `g·v` for `v` in a free module of rank `v.len() / n`.
pub fn act(g: &FiniteGroup, x: usize, v: &[u8]) -> Vec<u8> {
    let n = g.order();
    let mut out = vec![0u8; v.len()];
    for (idx, &c) in v.iter().enumerate() {
        if c != 0 {
            let (j, h) = (idx / n, idx % n);
            out[j * n + g.mul(x, h)] = c;
        }
    }
    out
}

/// The (ℤ/2ᴷ)-matrix of an equivariant map: row `(j, g)` is `g·rows[j]`.
pub fn expand(g: &FiniteGroup, rows: &ModKMatrix) -> ModKMatrix {
    let n = g.order();
    let mut out = ModKMatrix::zero(rows.k(), 0, rows.cols());
    for j in 0..rows.rows() {
        for x in 0..n {
            out.push_row(&act(g, x, rows.row(j)));
        }
    }
    out
}

/// Sum of coefficients over G within each free summand: `ε`-contraction of
/// generator images, shape `rows × (cols / n)`.
pub fn epsilon_contract(n: usize, rows: &ModKMatrix) -> ModKMatrix {
    let tr = rows.cols() / n.max(1);
    let mask = rows.mask();
    let mut out = ModKMatrix::zero(rows.k(), rows.rows(), tr);
    for j in 0..rows.rows() {
        let r = rows.row(j);
        for k in 0..tr {
            let s = r[k * n..(k + 1) * n].iter().fold(0u8, |a, &x| a.wrapping_add(x)) & mask;
            out.set(j, k, s);
        }
    }
    out
}

impl FreeResolution {
    /// Assembles a resolution from stored boundaries, checking shapes and
    /// `d ∘ d = 0`.
    pub fn from_parts(group: FiniteGroup, k: u32, ranks: Vec<usize>, boundaries: Vec<ModKMatrix>) -> Result<Self> {
        if ranks.first() != Some(&1) || boundaries.len() + 1 != ranks.len() {
            return Err(Error::Invariant("resolution ranks/boundaries mismatch".into()));
        }
        let n = group.order();
        for (i, d) in boundaries.iter().enumerate() {
            if d.k() != k || d.rows() != ranks[i + 1] || d.cols() != ranks[i] * n {
                return Err(Error::Invariant(format!("boundary d{} has wrong shape", i + 1)));
            }
        }
        let r = FreeResolution {
            group,
            k,
            ranks,
            boundaries,
        };
        r.check_d_squared()?;
        Ok(r)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn n(&self) -> usize {
        self.group.order()
    }
    pub fn max_degree(&self) -> usize {
        self.boundaries.len()
    }
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }
    pub fn rank(&self, i: usize) -> usize {
        self.ranks[i]
    }

    fn need(&self, i: usize) -> Result<()> {
        if i > self.max_degree() {
            Err(Error::DegreeOutOfRange {
                degree: i,
                max: self.max_degree(),
            })
        } else {
            Ok(())
        }
    }

    /// Generator images of `dᵢ` for `1 ≤ i ≤ max_degree()`. For `i = 0` the
    /// augmentation `P₀ → ℤ/2ᴷ` is returned as a `1 × 1` matrix `[1]` viewed
    /// over the trivial target.
    pub fn boundary(&self, i: usize) -> Result<&ModKMatrix> {
        self.need(i)?;
        if i == 0 {
            return Err(Error::Invariant("d0 is the augmentation; use augmentation()".into()));
        }
        Ok(&self.boundaries[i - 1])
    }

    /// Full matrix of `dᵢ` on `Pᵢ`, shape `(rᵢ·n) × (rᵢ₋₁·n)`; for `i = 0`
    /// the augmentation `n × 1` matrix of ones.
    pub fn expanded(&self, i: usize) -> Result<ModKMatrix> {
        self.need(i)?;
        if i == 0 {
            let mut m = ModKMatrix::zero(self.k, self.n(), 1);
            for h in 0..self.n() {
                m.set(h, 0, 1);
            }
            return Ok(m);
        }
        Ok(expand(&self.group, &self.boundaries[i - 1]))
    }

    /// `dᵢ(v)` for `v ∈ Pᵢ`.
    pub fn apply_boundary(&self, i: usize, v: &[u8]) -> Result<Vec<u8>> {
        self.need(i)?;
        if i == 0 {
            let s = v.iter().fold(0u8, |a, &x| a.wrapping_add(x)) & mask_of(self.k);
            return Ok(vec![s]);
        }
        Ok(apply_equivariant(&self.group, &self.boundaries[i - 1], v))
    }

    /// `ε(dᵢ)` of shape `rᵢ × rᵢ₋₁`: the matrix of `Hom(dᵢ, ℤ/2ᴷ)` in the
    /// generator bases.
    pub fn epsilon_boundary(&self, i: usize) -> Result<ModKMatrix> {
        self.need(i)?;
        if i == 0 {
            return Ok(ModKMatrix::from_rows(self.k, 1, &[vec![1]]));
        }
        Ok(epsilon_contract(self.n(), &self.boundaries[i - 1]))
    }

    /// Solver for `x · expanded(i) = b`, i.e. preimages under `dᵢ`.
    pub fn solver(&self, i: usize) -> Result<Solver> {
        Ok(Solver::new(&self.expanded(i)?))
    }

    /// The same complex with coefficients reduced to ℤ/2^`k2`.
    pub fn reduce(&self, k2: u32) -> Result<FreeResolution> {
        if k2 == 0 || k2 > self.k {
            return Err(Error::ModulusTooSmall { need: k2, have: self.k });
        }
        Ok(FreeResolution {
            group: self.group.clone(),
            k: k2,
            ranks: self.ranks.clone(),
            boundaries: self.boundaries.iter().map(|d| d.reduce_to(k2)).collect(),
        })
    }

    /// Truncation to degrees `≤ deg`.
    pub fn truncate(&self, deg: usize) -> FreeResolution {
        let d = deg.min(self.max_degree());
        FreeResolution {
            group: self.group.clone(),
            k: self.k,
            ranks: self.ranks[..=d].to_vec(),
            boundaries: self.boundaries[..d].to_vec(),
        }
    }

    pub fn boundaries(&self) -> &[ModKMatrix] {
        &self.boundaries
    }

    /// Every boundary entry lies in the maximal ideal `(2, I_G)`.
    pub fn is_minimal(&self) -> bool {
        (1..=self.max_degree()).all(|i| {
            self.epsilon_boundary(i)
                .map(|e| e.as_flat().iter().all(|&x| x & 1 == 0))
                .unwrap_or(false)
        })
    }

    /// `dᵢ₋₁ ∘ dᵢ = 0` on generators, and `ε ∘ d₁ = 0`.
    pub fn check_d_squared(&self) -> Result<()> {
        for i in 1..=self.max_degree() {
            for j in 0..self.ranks[i] {
                let y = self.apply_boundary(i - 1, self.boundaries[i - 1].row(j))?;
                if y.iter().any(|&c| c != 0) {
                    return Err(Error::Invariant(format!("d{}∘d{} ≠ 0 on generator {j}", i - 1, i)));
                }
            }
        }
        Ok(())
    }

    /// Exactness at every `Pᵢ`, `0 ≤ i < max_degree()`, and surjectivity of
    /// the augmentation: `|im dᵢ₊₁| = |ker dᵢ|`, with `d∘d = 0`.
    pub fn check_exact(&self) -> Result<()> {
        self.check_d_squared()?;
        for i in 0..self.max_degree() {
            let e = self.expanded(i)?;
            let total = (e.rows() as u32) * self.k;
            let ker = total - e.span_log2_order();
            let im = self.expanded(i + 1)?.span_log2_order();
            if ker != im {
                return Err(Error::Invariant(format!("not exact at P{i}: |ker| = 2^{ker}, |im| = 2^{im}")));
            }
        }
        Ok(())
    }
}

/// Minimal free resolution of ℤ/2ᴷ over (ℤ/2ᴷ)[G] through degree `maxdeg`.
///
/// (ℤ/2ᴷ)[G] is local with maximal ideal `m = (2, I_G)` when G is a 2-group,
/// so lifts of an 𝔽₂-basis of `ker/(m·ker)` generate the kernel minimally.
pub fn minimal_resolution(g: &FiniteGroup, k: u32, maxdeg: usize) -> Result<FreeResolution> {
    g.log2_order()?;
    if !(1..=8).contains(&k) {
        return Err(Error::ModulusTooSmall { need: k.max(1), have: 8 });
    }
    let n = g.order();
    let gens = g.generators();
    let mut ranks = vec![1usize];
    let mut boundaries: Vec<ModKMatrix> = Vec::with_capacity(maxdeg);
    let mut prev = {
        let mut m = ModKMatrix::zero(k, n, 1);
        for h in 0..n {
            m.set(h, 0, 1);
        }
        m
    };
    for _ in 1..=maxdeg {
        let dim = prev.rows();
        let mut d = ModKMatrix::zero(k, 0, dim);
        for row in kernel_generators(g, &gens, &prev)? {
            d.push_row(&row);
        }
        ranks.push(d.rows());
        prev = expand(g, &d);
        boundaries.push(d);
    }
    Ok(FreeResolution {
        group: g.clone(),
        k,
        ranks,
        boundaries,
    })
}

/// An 𝔽₂-basis of a kernel in reduced echelon form; `pivots[t]` is the
/// pivot column of `rows[t]`.
struct KernelBasis {
    rows: Vec<Vec<u8>>,
    pivots: Vec<usize>,
}

fn kernel_mod2(m: &ModKMatrix) -> KernelBasis {
    let ker = BitMatrix::from_modk(&m.reduce_to(1)).left_kernel();
    let mut rows = Vec::with_capacity(ker.rows());
    let mut pivots = Vec::with_capacity(ker.rows());
    for i in 0..ker.rows() {
        let r = ker.row(i);
        pivots.push(r.first_one().expect("nonzero kernel row"));
        rows.push(r.to_residues());
    }
    KernelBasis { rows, pivots }
}

/// Minimal generators of `{x : x · m = 0}`.
///
/// The kernel `Z` is a direct summand (the truncated complex is split exact
/// over ℤ/2ᴷ), so `Z/2Z` is the kernel of `m` mod 2 and
/// `Z/(2, I_G)Z = (Z/2Z)/I_G(Z/2Z)`. Generators are chosen mod 2 and then
/// lifted into `Z`.
fn kernel_generators(g: &FiniteGroup, gens: &[usize], m: &ModKMatrix) -> Result<Vec<Vec<u8>>> {
    let basis = kernel_mod2(m);
    let chosen = minimal_generators(g, gens, &basis);
    if m.k() == 1 {
        return Ok(chosen.into_iter().map(|c| basis.rows[c].clone()).collect());
    }
    let aug = m.hstack(&ModKMatrix::identity(m.k(), m.rows()));
    let h = howell(aug.to_rows(), m.k(), aug.cols(), false);
    let z: Vec<Vec<u8>> = h
        .rows
        .iter()
        .zip(&h.pivots)
        .filter(|(_, p)| p.col >= m.cols())
        .map(|(r, _)| r[m.cols()..].to_vec())
        .collect();
    let zbar = ModKMatrix::from_rows(m.k(), m.rows(), &z).reduce_to(1);
    let solver = Solver::new(&zbar);
    let mut out = Vec::with_capacity(chosen.len());
    for c in chosen {
        let coeff = solver
            .solve(&basis.rows[c])
            .ok_or_else(|| Error::Invariant("kernel mod 2 is not the reduction of the kernel".into()))?;
        let mut v = vec![0u8; m.rows()];
        for (t, &a) in coeff.iter().enumerate() {
            if a & 1 == 1 {
                for (o, &x) in v.iter_mut().zip(&z[t]) {
                    *o = o.wrapping_add(x);
                }
            }
        }
        let mask = m.mask();
        v.iter_mut().for_each(|x| *x &= mask);
        out.push(v);
    }
    Ok(out)
}

/// Indices into `basis` whose rows span a complement of `I_G·span`.
fn minimal_generators(g: &FiniteGroup, gens: &[usize], basis: &KernelBasis) -> Vec<usize> {
    let b = basis.rows.len();
    if b == 0 {
        return Vec::new();
    }
    // coordinates of (x − 1)·v in the basis
    let mut a = BitMatrix::zero(gens.len() * b, b);
    for (t, row) in basis.rows.iter().enumerate() {
        for (s, &x) in gens.iter().enumerate() {
            let moved = act(g, x, row);
            for (c, &p) in basis.pivots.iter().enumerate() {
                if (moved[p] ^ row[p]) & 1 == 1 {
                    a.set(s * b + t, c, true);
                }
            }
        }
    }
    let pivots = a.rref();
    let mut is_pivot = vec![false; b];
    for p in pivots {
        is_pivot[p] = true;
    }
    (0..b).filter(|&c| !is_pivot[c]).collect()
}

/// Decomposition `x = h·s` of group elements against right cosets `H s`.
pub(crate) struct RightCosets {
    /// right coset representatives `s_t`
    pub reps: Vec<usize>,
    /// for each `x ∈ G`: `(t, local index of h)` with `x = h·s_t`
    pub split: Vec<(usize, usize)>,
}

impl RightCosets {
    pub fn new(g: &FiniteGroup, h: &Subgroup) -> Self {
        let reps = h.right_coset_reps(g);
        let mut split = vec![(usize::MAX, usize::MAX); g.order()];
        for (t, &s) in reps.iter().enumerate() {
            for (li, &y) in h.elements().iter().enumerate() {
                split[g.mul(y, s)] = (t, li);
            }
        }
        RightCosets { reps, split }
    }
}

/// The resolution viewed over (ℤ/2ᴷ)[H]. The H-basis of `Pᵢ` is
/// `{s_t·eⱼ}` for right coset representatives `s_t`, generator index
/// `j·[G:H] + t`; elements of H are numbered as in
/// [`Subgroup::as_group`].
pub fn restrict_resolution(res: &FreeResolution, h: &Subgroup) -> FreeResolution {
    let g = &res.group;
    let hg = h.as_group(g);
    let m = h.index();
    let nh = h.order();
    let n = g.order();
    let rc = RightCosets::new(g, h);
    let mut boundaries = Vec::with_capacity(res.max_degree());
    for i in 1..=res.max_degree() {
        let d = &res.boundaries[i - 1];
        let src = res.ranks[i];
        let tgt = res.ranks[i - 1];
        let mut out = ModKMatrix::zero(res.k, src * m, tgt * m * nh);
        for j in 0..src {
            let row = d.row(j);
            for (t, &s) in rc.reps.iter().enumerate() {
                let r = out.row_mut(j * m + t);
                for k in 0..tgt {
                    for x in 0..n {
                        let c = row[k * n + x];
                        if c != 0 {
                            let (t2, li) = rc.split[g.mul(s, x)];
                            r[(k * m + t2) * nh + li] = c;
                        }
                    }
                }
            }
        }
        boundaries.push(out);
    }
    FreeResolution {
        group: hg,
        k: res.k,
        ranks: res.ranks.iter().map(|&r| r * m).collect(),
        boundaries,
    }
}

/// An equivariant chain map between free complexes over the same group,
/// given by generator images: `components[i]` has shape
/// `source.rank(i) × (target.rank(i)·n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub components: Vec<ModKMatrix>,
}

impl ChainMap {
    pub fn max_degree(&self) -> usize {
        self.components.len().saturating_sub(1)
    }

    /// `fᵢ(v)` for `v` in the source module `Pᵢ`.
    pub fn apply(&self, g: &FiniteGroup, i: usize, v: &[u8]) -> Vec<u8> {
        apply_equivariant(g, &self.components[i], v)
    }

    /// Matrix of the induced map on cochains with trivial coefficients,
    /// shape `source.rank(i) × target.rank(i)`: a target cochain `a` pulls
    /// back to `ε(fᵢ) · a`.
    pub fn epsilon(&self, n: usize, i: usize) -> ModKMatrix {
        epsilon_contract(n, &self.components[i])
    }

    /// Exact check of `d ∘ fᵢ = fᵢ₋₁ ∘ d` on source generators.
    pub fn check(&self, source: &FreeResolution, target: &FreeResolution) -> Result<()> {
        let g = source.group();
        for i in 1..self.components.len() {
            for j in 0..source.rank(i) {
                let lhs = target.apply_boundary(i, self.components[i].row(j))?;
                let rhs = self.apply(g, i - 1, source.boundaries[i - 1].row(j));
                if lhs != rhs {
                    return Err(Error::Invariant(format!("chain map square fails in degree {i}")));
                }
            }
        }
        Ok(())
    }
}

/// Lifts `f₀` (generator images `source.rank(0) × (target.rank(0)·n)`) to a
/// chain map through degree `maxdeg` by solving `d(fᵢ(e)) = fᵢ₋₁(d e)`
/// degree by degree in the target.
pub fn lift_chain_map(
    source: &FreeResolution,
    target: &FreeResolution,
    f0: ModKMatrix,
    maxdeg: usize,
) -> Result<ChainMap> {
    if source.group() != target.group() || source.k() != target.k() {
        return Err(Error::IncompatibleOperands("chain map needs a common group and modulus".into()));
    }
    source.need(maxdeg)?;
    target.need(maxdeg)?;
    let g = source.group();
    let n = g.order();
    if f0.rows() != source.rank(0) || f0.cols() != target.rank(0) * n {
        return Err(Error::IncompatibleOperands("degree-0 component has wrong shape".into()));
    }
    let mut comps = vec![f0];
    for i in 1..=maxdeg {
        let solver = target.solver(i)?;
        let mut fi = ModKMatrix::zero(source.k(), 0, target.rank(i) * n);
        for j in 0..source.rank(i) {
            let b = apply_equivariant(g, &comps[i - 1], source.boundaries[i - 1].row(j));
            let x = solver.solve(&b).ok_or(Error::LiftFailed { degree: i })?;
            fi.push_row(&x);
        }
        comps.push(fi);
    }
    Ok(ChainMap { components: comps })
}

/// The degree-0 component sending each source generator to the target
/// generator `e₀`: the lift of the identity of the trivial module when both
/// complexes have `P₀` of rank 1.
pub fn identity_f0(source: &FreeResolution, target: &FreeResolution) -> ModKMatrix {
    let n = source.n();
    let mut f0 = ModKMatrix::zero(source.k(), source.rank(0), target.rank(0) * n);
    for j in 0..source.rank(0) {
        f0.set(j, 0, 1);
    }
    f0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::builtin;

    #[test]
    fn trivial_group() {
        let g = builtin("trivial").unwrap();
        let r = minimal_resolution(&g, 3, 4).unwrap();
        assert_eq!(r.ranks(), &[1, 0, 0, 0, 0]);
        r.check_exact().unwrap();
    }

    #[test]
    fn c2_periodic() {
        let g = builtin("C2").unwrap();
        let r = minimal_resolution(&g, 1, 4).unwrap();
        assert_eq!(r.ranks(), &[1, 1, 1, 1, 1]);
        for d in r.boundaries() {
            // multiplication by 1 + τ
            assert_eq!(d.row(0), &[1, 1]);
        }
        r.check_exact().unwrap();
        assert!(r.is_minimal());
    }

    #[test]
    fn c2_over_z4() {
        let g = builtin("C2").unwrap();
        let r = minimal_resolution(&g, 2, 4).unwrap();
        assert_eq!(r.ranks(), &[1, 1, 1, 1, 1]);
        r.check_exact().unwrap();
        assert!(r.is_minimal());
    }

    #[test]
    fn not_a_two_group() {
        let g = builtin("C3").unwrap();
        assert!(matches!(minimal_resolution(&g, 1, 2), Err(Error::NotA2Group { .. })));
    }

    #[test]
    fn restriction_to_trivial_subgroup() {
        let g = builtin("C2").unwrap();
        let r = minimal_resolution(&g, 1, 3).unwrap();
        let e = Subgroup::trivial(&g);
        let rr = restrict_resolution(&r, &e);
        assert_eq!(rr.ranks(), &[2, 2, 2, 2]);
        rr.check_d_squared().unwrap();
        // exact in positive degrees
        for i in 1..3 {
            let e = rr.expanded(i).unwrap();
            let ker = e.rows() as u32 - e.span_log2_order();
            assert_eq!(ker, rr.expanded(i + 1).unwrap().span_log2_order());
        }
    }

    #[test]
    fn identity_lift_and_zero_lift() {
        let g = builtin("V4").unwrap();
        let r = minimal_resolution(&g, 2, 3).unwrap();
        let f = lift_chain_map(&r, &r, identity_f0(&r, &r), 3).unwrap();
        f.check(&r, &r).unwrap();
        let z = lift_chain_map(&r, &r, ModKMatrix::zero(2, 1, 4), 3).unwrap();
        assert!(z.components.iter().all(|c| c.is_zero()));
    }
}

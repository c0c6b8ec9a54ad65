//! The connecting map `α_L : H¹(G, Λ²L) → H²(G, L/2)` and `Φ(G, L)`.
//!
//! With `A = Λ²L` and `2ᵏ = |G|`, every class of `H¹(G, A)` is
//! `c(g) = (gṽ − ṽ)/2ᵏ` for a lift `ṽ` of some `v ∈ (A/2ᵏ)^G`. Lifting
//! `c` through the section `eₚ∧e_q ↦ eₚ⋆e_q` and taking the coboundary in
//! `Γ²L` leaves only the `eₐ⋆eₐ` part of `g·s(c(h))`, which is
//! `Σ_{p<q} c(h)_{pq} (A_g)_{ap} (A_g)_{aq}` mod 2.

use alloc::vec;
use alloc::vec::Vec;

use super::bar::{mod2_action, mod2_coboundaries, mod2_coboundary};
use super::coflasque::{coflasque_resolution, coflasque_resolution_with, CoflasqueResolution, Strategy};
use super::exterior::{lambda2, pairs};
use super::glattice::{small_gens, GLattice};
use crate::error::{Error, Result};
use crate::linalg::{BitVec, ModKMatrix, Subspace};
use crate::subgroup::Subgroup;

/// Largest group order for α and Φ.
pub const MAX_ALPHA_ORDER: usize = 16;
/// Largest rank of `Λ²L` for α.
pub const MAX_LAMBDA2_RANK: usize = 4000;

/// `Im α_L` inside `H²(G, L/2)`: every invariant factor is 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaImage {
    pub dim: usize,
    /// reduced-echelon generators, as 2-cochains reduced modulo coboundaries
    pub generators: Vec<BitVec>,
}

impl AlphaImage {
    pub fn invariant_factors(&self) -> Vec<u64> {
        vec![2; self.dim]
    }
}

fn check_budget(l: &GLattice) -> Result<u32> {
    let n = l.group().order();
    if n > MAX_ALPHA_ORDER {
        return Err(Error::BudgetExceeded {
            what: "group order for α",
            value: n,
            limit: MAX_ALPHA_ORDER,
        });
    }
    let r = l.rank();
    let w = r * r.saturating_sub(1) / 2;
    if w > MAX_LAMBDA2_RANK {
        return Err(Error::BudgetExceeded {
            what: "rank of Λ²L for α",
            value: w,
            limit: MAX_LAMBDA2_RANK,
        });
    }
    l.group().log2_order()
}

/// Integral 1-cocycles `c` with values in `Λ²L`, one per generator of
/// `(Λ²L/2ᵏ)^G`; together they represent all of `H¹(G, Λ²L)`.
pub fn lambda2_h1_cocycles(l: &GLattice) -> Result<Vec<Vec<Vec<i64>>>> {
    let k = check_budget(l)?;
    let g = l.group();
    let n = g.order();
    if k == 0 || l.rank() < 2 {
        return Ok(Vec::new());
    }
    let a = lambda2(l)?;
    let w = a.rank();
    let gens = small_gens(g, &Subgroup::whole(g));
    let mask = (1i64 << k) - 1;
    let mut m = ModKMatrix::zero(k, w, gens.len() * w);
    for (gi, &x) in gens.iter().enumerate() {
        let ax = a.matrix(x);
        for i in 0..w {
            for j in 0..w {
                let mut v = ax.get(j, i);
                if i == j {
                    v -= 1;
                }
                m.set(i, gi * w + j, (v & mask) as u8);
            }
        }
    }
    let fixed = m.kernel_basis();
    let mut out = Vec::with_capacity(fixed.rows());
    for row in fixed.to_rows() {
        let v: Vec<i64> = row.iter().map(|&x| x as i64).collect();
        let mut c = Vec::with_capacity(n);
        for h in 0..n {
            let img = a.matrix(h).apply(&v);
            let mut ch = Vec::with_capacity(w);
            for (y, x) in img.iter().zip(&v) {
                let d = y - x;
                if d & mask != 0 {
                    return Err(Error::Invariant("fixed vector mod 2^k is not fixed".into()));
                }
                ch.push(d >> k);
            }
            c.push(ch);
        }
        out.push(c);
    }
    Ok(out)
}

/// `α(c)` as a mod-2 bar 2-cochain of `L/2`, index `(g·n + h)·r + a`.
pub fn alpha_cochain(l: &GLattice, c: &[Vec<i64>]) -> BitVec {
    let n = l.group().order();
    let r = l.rank();
    let ps = pairs(r);
    let mut out = BitVec::zero(n * n * r);
    for g in 0..n {
        let ag = l.matrix(g);
        for (h, ch) in c.iter().enumerate() {
            for a in 0..r {
                let mut bit = 0i64;
                for (i, &(p, q)) in ps.iter().enumerate() {
                    if ch[i] & 1 == 1 {
                        bit ^= ag.get(a, p) & ag.get(a, q) & 1;
                    }
                }
                if bit == 1 {
                    out.set((g * n + h) * r + a, true);
                }
            }
        }
    }
    out
}

pub fn alpha_image(l: &GLattice) -> Result<AlphaImage> {
    let cocycles = lambda2_h1_cocycles(l)?;
    if cocycles.is_empty() {
        return Ok(AlphaImage {
            dim: 0,
            generators: Vec::new(),
        });
    }
    let act = mod2_action(l);
    let b2 = mod2_coboundaries(l, 2)?;
    let mut img = Subspace::zero(b2.ambient_dim());
    for c in &cocycles {
        let a = alpha_cochain(l, c);
        if !mod2_coboundary(l, &act, 2, &a).is_zero() {
            return Err(Error::Invariant("α(c) is not a cocycle".into()));
        }
        img.insert(b2.reduce(&a));
    }
    Ok(AlphaImage {
        dim: img.dim(),
        generators: img.basis().to_vec(),
    })
}

/// `Φ(G, L)` with the coflasque resolution used.
#[derive(Clone, Debug)]
pub struct PhiResult {
    pub image: AlphaImage,
    pub resolution: CoflasqueResolution,
    /// dimension from a second, larger resolution, when it was affordable
    pub cross_check: Option<usize>,
}

impl PhiResult {
    pub fn invariant_factors(&self) -> Vec<u64> {
        self.image.invariant_factors()
    }
}

pub fn phi(l: &GLattice) -> Result<PhiResult> {
    check_budget_order(l)?;
    let res = coflasque_resolution(l)?;
    let image = alpha_image(&res.r)?;
    let cross_check = match coflasque_resolution_with(l, Strategy::Full) {
        Ok(full) if full.r.rank() != res.r.rank() => match alpha_image(&full.r) {
            Ok(a) => Some(a.dim),
            Err(Error::BudgetExceeded { .. }) => None,
            Err(e) => return Err(e),
        },
        Ok(_) | Err(Error::BudgetExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    if let Some(d) = cross_check {
        if d != image.dim {
            return Err(Error::Invariant("Φ depends on the coflasque resolution".into()));
        }
    }
    Ok(PhiResult {
        image,
        resolution: res,
        cross_check,
    })
}

fn check_budget_order(l: &GLattice) -> Result<()> {
    let n = l.group().order();
    if n > MAX_ALPHA_ORDER {
        return Err(Error::BudgetExceeded {
            what: "group order for Φ",
            value: n,
            limit: MAX_ALPHA_ORDER,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::builtin;
    use crate::subgroup::subgroup_classes;

    #[test]
    fn permutation_lattices_have_zero_alpha() {
        for name in ["C2", "C4", "V4"] {
            let g = builtin(name).unwrap();
            assert_eq!(alpha_image(&GLattice::regular(&g)).unwrap().dim, 0);
            for h in subgroup_classes(&g, 100).unwrap() {
                let p = GLattice::coset_lattice(&g, &h);
                assert_eq!(alpha_image(&p).unwrap().dim, 0);
            }
        }
    }

    #[test]
    fn rank_one_is_zero() {
        let g = builtin("C2").unwrap();
        assert_eq!(alpha_image(&GLattice::sign(&g).unwrap()).unwrap().dim, 0);
    }

    #[test]
    fn sign_plus_sign_over_c2() {
        // Λ²(ℤ⁻ ⊕ ℤ⁻) is trivial of rank 1, so H¹ = 0
        let g = builtin("C2").unwrap();
        let s = GLattice::sign(&g).unwrap();
        let l = s.direct_sum(&s).unwrap();
        assert_eq!(alpha_image(&l).unwrap().dim, 0);
    }

    #[test]
    fn budget_guard() {
        let g = crate::group::FiniteGroup::cyclic(32);
        assert!(matches!(
            alpha_image(&GLattice::trivial(&g, 2)),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}

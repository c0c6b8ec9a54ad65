//! Coflasque resolutions `0 → R → P → L → 0`.
//!
//! `P` is a sum of permutation lattices `ℤ[G/H]` mapping `tH ↦ t·x` for
//! some `x ∈ L^H`. Since `H¹(K, P) = 0`, `R` is coflasque exactly when
//! `P^K → L^K` is onto for every subgroup `K`; this is enforced while
//! building and then re-verified on `R` directly.

use alloc::vec;
use alloc::vec::Vec;

use super::glattice::{h1_integral, GLattice, LatticeSES};
use crate::error::{Error, Result};
use crate::linalg::int::solve_left_with;
use crate::linalg::IntMatrix;
use crate::subgroup::{subgroup_classes, Subgroup};

#[derive(Clone, Debug)]
pub struct CoflasqueResolution {
    pub r: GLattice,
    pub p: GLattice,
    /// `R → P`, `rank P × rank R`
    pub inclusion: IntMatrix,
    /// `P → L`, `rank L × rank P`
    pub projection: IntMatrix,
    /// the summands `ℤ[G/H] · x`
    pub summands: Vec<(Subgroup, Vec<i64>)>,
}

impl CoflasqueResolution {
    pub fn to_ses(&self, l: &GLattice) -> LatticeSES {
        LatticeSES {
            a: self.r.clone(),
            b: self.p.clone(),
            c: l.clone(),
            f: self.inclusion.clone(),
            p: self.projection.clone(),
        }
    }
}

/// How summands are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// add `ℤ[G/K]·x` only while `P^K → L^K` is not onto, largest `K` first
    Greedy,
    /// `ℤ[G/H]·x` for every class `H` and every basis vector `x` of `L^H`
    Full,
}

pub fn coflasque_resolution(l: &GLattice) -> Result<CoflasqueResolution> {
    coflasque_resolution_with(l, Strategy::Greedy)
}

pub fn coflasque_resolution_with(l: &GLattice, strategy: Strategy) -> Result<CoflasqueResolution> {
    let g = l.group();
    let r = l.rank();
    if l.is_permutation() {
        return Ok(CoflasqueResolution {
            r: GLattice::trivial(g, 0),
            p: l.clone(),
            inclusion: IntMatrix::zero(r, 0),
            projection: IntMatrix::identity(r),
            summands: Vec::new(),
        });
    }
    let mut classes = subgroup_classes(g, usize::MAX)?;
    classes.reverse();
    let fixed: Vec<IntMatrix> = classes.iter().map(|h| l.fixed_points(h)).collect::<Result<_>>()?;
    let mut summands: Vec<(Subgroup, Vec<i64>)> = Vec::new();
    match strategy {
        Strategy::Full => {
            for (h, f) in classes.iter().zip(&fixed) {
                for x in f.to_rows() {
                    summands.push((h.clone(), x));
                }
            }
        }
        Strategy::Greedy => {
            for (k, f) in classes.iter().zip(&fixed) {
                if f.rows() == 0 {
                    continue;
                }
                let fs = f.smith()?;
                loop {
                    // image of P^K in coordinates of the basis of L^K
                    let coords: Vec<Vec<i64>> = fixed_images(l, &summands, k)
                        .iter()
                        .map(|v| solve_left_with(&fs, v).ok_or_else(|| Error::Invariant("P^K ⊄ L^K".into())))
                        .collect::<Result<_>>()?;
                    let img = IntMatrix::from_rows(f.rows(), &coords);
                    let onto = if coords.is_empty() {
                        false
                    } else {
                        let fac = img.invariant_factors()?;
                        fac.len() == f.rows() && fac.iter().all(|&d| d == 1)
                    };
                    if onto {
                        break;
                    }
                    let pick = (0..f.rows())
                        .find(|&i| {
                            let mut e = vec![0i64; f.rows()];
                            e[i] = 1;
                            coords.is_empty() || img.solve_left(&e).ok().flatten().is_none()
                        })
                        .ok_or_else(|| Error::Invariant("P^K → L^K has full-rank unit image".into()))?;
                    summands.push((k.clone(), f.row(pick).to_vec()));
                }
            }
        }
    }
    build(l, summands, &classes)
}

/// Images in `L` of the orbit sums spanning `P^K`.
fn fixed_images(l: &GLattice, summands: &[(Subgroup, Vec<i64>)], k: &Subgroup) -> Vec<Vec<i64>> {
    let g = l.group();
    let mut out = Vec::new();
    for (h, x) in summands {
        let reps = h.coset_reps();
        let mut label = vec![0usize; g.order()];
        for (i, &t) in reps.iter().enumerate() {
            for &y in h.elements() {
                label[g.mul(t, y)] = i;
            }
        }
        let mut seen = vec![false; reps.len()];
        for i in 0..reps.len() {
            if seen[i] {
                continue;
            }
            let mut sum = vec![0i64; l.rank()];
            for &kk in k.elements() {
                let j = label[g.mul(kk, reps[i])];
                if !seen[j] {
                    seen[j] = true;
                    for (s, v) in sum.iter_mut().zip(l.matrix(reps[j]).apply(x)) {
                        *s += v;
                    }
                }
            }
            out.push(sum);
        }
    }
    out
}

fn build(l: &GLattice, summands: Vec<(Subgroup, Vec<i64>)>, classes: &[Subgroup]) -> Result<CoflasqueResolution> {
    let g = l.group();
    let mut p = GLattice::trivial(g, 0);
    let mut cols: Vec<Vec<i64>> = Vec::new();
    for (h, x) in &summands {
        p = p.direct_sum(&GLattice::coset_lattice(g, h))?;
        for &t in h.coset_reps() {
            cols.push(l.matrix(t).apply(x));
        }
    }
    let mut projection = IntMatrix::zero(l.rank(), cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (i, &v) in c.iter().enumerate() {
            projection.set(i, j, v);
        }
    }
    l_check_onto(&projection, l.rank())?;
    let kernel = projection.right_kernel()?;
    let r = p.sublattice(&kernel)?;
    let inclusion = kernel.transpose();
    let res = CoflasqueResolution {
        r,
        p,
        inclusion,
        projection,
        summands,
    };
    res.to_ses(l).verify()?;
    for h in classes {
        if !h1_integral(&res.r, h)?.is_empty() {
            return Err(Error::CoflasquenessCheckFailed { order: h.order() });
        }
    }
    Ok(res)
}

fn l_check_onto(p: &IntMatrix, rank: usize) -> Result<()> {
    let f = p.invariant_factors()?;
    if f.len() != rank || f.iter().any(|&d| d != 1) {
        return Err(Error::Invariant("P → L is not onto".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::builtin;

    #[test]
    fn permutation_is_its_own_resolution() {
        let g = builtin("C4").unwrap();
        let c = coflasque_resolution(&GLattice::regular(&g)).unwrap();
        assert_eq!(c.r.rank(), 0);
        assert_eq!(c.p.rank(), 4);
    }

    #[test]
    fn sign_of_c2() {
        let g = builtin("C2").unwrap();
        let s = GLattice::sign(&g).unwrap();
        let c = coflasque_resolution(&s).unwrap();
        assert_eq!(c.p.rank(), 2);
        assert_eq!(c.r.rank(), 1);
        assert_eq!(c.r.matrix(1).get(0, 0), 1);
    }

    #[test]
    fn full_strategy_is_coflasque() {
        let g = builtin("V4").unwrap();
        let s = GLattice::sign(&g).unwrap();
        let l = s.direct_sum(&GLattice::trivial(&g, 1)).unwrap();
        let c = coflasque_resolution_with(&l, Strategy::Full).unwrap();
        assert_eq!(c.p.rank(), c.r.rank() + 2);
    }
}

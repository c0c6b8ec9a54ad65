//! Inhomogeneous bar cochains `Cⁱ(G, L) = Map(Gⁱ, L)`.
//!
//! The cochain `f` is a vector indexed by `(tuple, j)` with the tuple
//! `(g₁, …, gᵢ)` read as a base-`n` number, most significant first:
//! index `tuple · r + j`. The differential is
//! `(δf)(g₁…g_{i+1}) = g₁ f(g₂…) + Σ (−1)ᵏ f(…gₖg_{k+1}…) + (−1)^{i+1} f(g₁…gᵢ)`.

use alloc::vec;
use alloc::vec::Vec;

use super::glattice::GLattice;
use crate::error::{Error, Result};
use crate::linalg::{BitMatrix, BitVec, IntMatrix, Subspace};

/// Largest cochain-space rank built densely.
pub const MAX_BAR_RANK: usize = 20_000;

fn tuple_digits(mut t: usize, n: usize, len: usize) -> Vec<usize> {
    let mut d = vec![0usize; len];
    for k in (0..len).rev() {
        d[k] = t % n;
        t /= n;
    }
    d
}

fn tuple_index(d: &[usize], n: usize) -> usize {
    d.iter().fold(0, |acc, &x| acc * n + x)
}

/// The faces of a degree-`i+1` tuple: `(sign, source tuple, act by g₁?)`.
fn faces(d: &[usize], g: &crate::group::FiniteGroup) -> Vec<(i64, Vec<usize>, bool)> {
    let m = d.len();
    let mut out = Vec::with_capacity(m + 1);
    out.push((1, d[1..].to_vec(), true));
    for k in 0..m - 1 {
        let mut t = d[..k].to_vec();
        t.push(g.mul(d[k], d[k + 1]));
        t.extend_from_slice(&d[k + 2..]);
        out.push((if (k + 1) % 2 == 0 { 1 } else { -1 }, t, false));
    }
    out.push((if m.is_multiple_of(2) { 1 } else { -1 }, d[..m - 1].to_vec(), false));
    out
}

fn check_budget(rows: usize) -> Result<()> {
    if rows > MAX_BAR_RANK {
        return Err(Error::BudgetExceeded {
            what: "bar cochain rank",
            value: rows,
            limit: MAX_BAR_RANK,
        });
    }
    Ok(())
}

/// `δⁱ : Cⁱ → Cⁱ⁺¹` as a matrix acting on columns.
pub fn bar_differential(l: &GLattice, i: usize) -> Result<IntMatrix> {
    let g = l.group();
    let (n, r) = (g.order(), l.rank());
    let src = n.pow(i as u32) * r;
    let dst = n.pow(i as u32 + 1) * r;
    check_budget(dst)?;
    let mut m = IntMatrix::zero(dst, src);
    for t in 0..n.pow(i as u32 + 1) {
        let d = tuple_digits(t, n, i + 1);
        for (sign, face, act) in faces(&d, g) {
            let s = tuple_index(&face, n);
            for j in 0..r {
                if act {
                    let a = l.matrix(d[0]);
                    for a_row in 0..r {
                        let v = a.get(a_row, j);
                        if v != 0 {
                            let x = m.get(t * r + a_row, s * r + j) + sign * v;
                            m.set(t * r + a_row, s * r + j, x);
                        }
                    }
                } else {
                    let x = m.get(t * r + j, s * r + j) + sign;
                    m.set(t * r + j, s * r + j, x);
                }
            }
        }
    }
    Ok(m)
}

/// `Hⁱ(G, L)` from the bar complex: free rank and the torsion invariant
/// factors (> 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarCohomology {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

pub fn bar_cohomology(l: &GLattice, i: usize) -> Result<BarCohomology> {
    let r = l.rank();
    let n = l.group().order();
    let dim = n.pow(i as u32) * r;
    let rank_out = if dim == 0 { 0 } else { bar_differential(l, i)?.rank()? };
    let (rank_in, torsion) = if i == 0 {
        (0, Vec::new())
    } else {
        let f = bar_differential(l, i - 1)?.invariant_factors()?;
        let t = f.iter().filter(|&&d| d.unsigned_abs() > 1).map(|d| d.unsigned_abs()).collect();
        (f.len(), t)
    };
    Ok(BarCohomology {
        free_rank: dim - rank_out - rank_in,
        torsion,
    })
}

/// The action reduced mod 2: `act[g]` is `A_g mod 2`, column convention.
pub fn mod2_action(l: &GLattice) -> Vec<BitMatrix> {
    l.matrices()
        .iter()
        .map(|m| {
            let mut b = BitMatrix::zero(m.rows(), m.cols());
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    if m.get(i, j) & 1 == 1 {
                        b.set(i, j, true);
                    }
                }
            }
            b
        })
        .collect()
}

/// Image of a mod-2 cochain under `δ`, computed pointwise.
pub fn mod2_coboundary(l: &GLattice, act: &[BitMatrix], i: usize, f: &BitVec) -> BitVec {
    let g = l.group();
    let (n, r) = (g.order(), l.rank());
    let count = n.pow(i as u32 + 1);
    let mut out = BitVec::zero(count * r);
    for t in 0..count {
        let d = tuple_digits(t, n, i + 1);
        for (_, face, on) in faces(&d, g) {
            let s = tuple_index(&face, n);
            for j in 0..r {
                if !f.get(s * r + j) {
                    continue;
                }
                if on {
                    for a in 0..r {
                        if act[d[0]].get(a, j) {
                            out.flip(t * r + a);
                        }
                    }
                } else {
                    out.flip(t * r + j);
                }
            }
        }
    }
    out
}

/// `Bⁱ(G, L/2)` as a subspace of `Cⁱ`, for `i ≥ 1`.
pub fn mod2_coboundaries(l: &GLattice, i: usize) -> Result<Subspace> {
    let (n, r) = (l.group().order(), l.rank());
    let dim = n.pow(i as u32) * r;
    check_budget(dim)?;
    let act = mod2_action(l);
    let src = n.pow(i as u32 - 1) * r;
    Ok(Subspace::spanned_by(
        dim,
        (0..src).map(|b| mod2_coboundary(l, &act, i - 1, &BitVec::unit(src, b))),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::builtin;

    #[test]
    fn d_squared_is_zero() {
        let g = builtin("D4").unwrap();
        let l = GLattice::regular(&g).direct_sum(&GLattice::sign(&g).unwrap()).unwrap();
        let d0 = bar_differential(&l, 0).unwrap();
        let d1 = bar_differential(&l, 1).unwrap();
        assert!(d1.mul(&d0).is_zero());
        let c2 = builtin("C2").unwrap();
        let s = GLattice::sign(&c2).unwrap();
        let d1 = bar_differential(&s, 1).unwrap();
        let d2 = bar_differential(&s, 2).unwrap();
        assert!(d2.mul(&d1).is_zero());
    }

    #[test]
    fn small_cohomology() {
        let c2 = builtin("C2").unwrap();
        let sign = GLattice::sign(&c2).unwrap();
        assert_eq!(bar_cohomology(&sign, 1).unwrap(), BarCohomology { free_rank: 0, torsion: vec![2] });
        assert_eq!(bar_cohomology(&sign, 2).unwrap(), BarCohomology { free_rank: 0, torsion: vec![] });
        let triv = GLattice::trivial(&c2, 1);
        assert_eq!(bar_cohomology(&triv, 0).unwrap().free_rank, 1);
        assert!(bar_cohomology(&triv, 1).unwrap().torsion.is_empty());
        assert_eq!(bar_cohomology(&triv, 2).unwrap().torsion, vec![2]);
    }

    #[test]
    fn mod2_coboundary_matches_integer_matrix() {
        let g = builtin("C4").unwrap();
        let l = GLattice::regular(&g);
        let act = mod2_action(&l);
        let d = bar_differential(&l, 1).unwrap();
        for b in 0..d.cols() {
            let v = mod2_coboundary(&l, &act, 1, &BitVec::unit(d.cols(), b));
            for a in 0..d.rows() {
                assert_eq!(v.get(a), d.get(a, b) & 1 == 1);
            }
        }
    }
}

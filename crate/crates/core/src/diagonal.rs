//! Contracting homotopies and diagonal approximations `Δ : P → P ⊗ P`.
//!
//! `P ⊗ P` carries the diagonal G-action and the differential
//! `D(x ⊗ y) = dx ⊗ y + (−1)^{|x|} x ⊗ dy`. With a (ℤ/2ᴷ)-linear contraction
//! `s` of `P → ℤ/2ᴷ`, the map `H = s ⊗ 1 + ηε ⊗ s` satisfies
//! `DH + HD = 1 − ηε ⊗ ηε`, so `Δ(eᵢ) = H(Δ(d eᵢ))` extended equivariantly is
//! a chain map over the identity.
//!
//! An element of `(P ⊗ P)_m` is stored as one dense vector per bidegree
//! `(p, m − p)`, indexed `(x, y) ↦ x·(r_{m−p}·n) + y` with `x, y` free-module
//! coordinates.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::modk::mask_of;
use crate::linalg::ModKMatrix;
use crate::resolution::FreeResolution;

/// `s_p : P_p → P_{p+1}` as `(r_p·n) × (r_{p+1}·n)` matrices (acting on row
/// vectors), with `s₋₁ = η`, `d s₀ = 1 − ηε`, and `d s_p + s_{p−1} d = 1`.
#[derive(Clone, Debug)]
pub struct ContractingHomotopy {
    pub maps: Vec<ModKMatrix>,
}

impl ContractingHomotopy {
    /// Needs `res` through degree `maxdeg + 1`.
    pub fn new(res: &FreeResolution, maxdeg: usize) -> Result<Self> {
        if maxdeg + 1 > res.max_degree() {
            return Err(Error::DegreeOutOfRange {
                degree: maxdeg + 1,
                max: res.max_degree(),
            });
        }
        let g = res.group();
        let n = res.n();
        let mask = mask_of(res.k());
        let mut maps: Vec<ModKMatrix> = Vec::with_capacity(maxdeg + 1);
        for p in 0..=maxdeg {
            let solver = res.solver(p + 1)?;
            let dim = res.rank(p) * n;
            let mut s = ModKMatrix::zero(res.k(), 0, res.rank(p + 1) * n);
            for idx in 0..dim {
                let (j, a) = (idx / n, idx % n);
                let mut t = vec![0u8; dim];
                t[idx] = 1;
                if p == 0 {
                    t[0] = t[0].wrapping_sub(1) & mask;
                } else {
                    let row = res.boundary(p)?.row(j);
                    let dx = crate::resolution::act(g, a, row);
                    let back = maps[p - 1].vec_mul(&dx);
                    for (o, b) in t.iter_mut().zip(back) {
                        *o = o.wrapping_sub(b) & mask;
                    }
                }
                let x = solver.solve(&t).ok_or(Error::LiftFailed { degree: p + 1 })?;
                s.push_row(&x);
            }
            maps.push(s);
        }
        Ok(ContractingHomotopy { maps })
    }

    /// Verifies `d s + s d = 1 − ηε` on every basis element.
    pub fn check(&self, res: &FreeResolution) -> Result<()> {
        let n = res.n();
        let mask = mask_of(res.k());
        for (p, s) in self.maps.iter().enumerate() {
            for idx in 0..s.rows() {
                let mut lhs = res.apply_boundary(p + 1, s.row(idx))?;
                if p > 0 {
                    let (j, a) = (idx / n, idx % n);
                    let dx = crate::resolution::act(res.group(), a, res.boundary(p)?.row(j));
                    for (o, b) in lhs.iter_mut().zip(self.maps[p - 1].vec_mul(&dx)) {
                        *o = o.wrapping_add(b) & mask;
                    }
                }
                let mut want = vec![0u8; s.rows()];
                want[idx] = 1;
                if p == 0 {
                    want[0] = want[0].wrapping_sub(1) & mask;
                }
                if lhs != want {
                    return Err(Error::Invariant(format!("contraction fails in degree {p}")));
                }
            }
        }
        Ok(())
    }
}

/// One element of `(P ⊗ P)_m`: `parts[p]` is the `(p, m − p)` component.
pub type TensorElement = Vec<Vec<u8>>;

/// A diagonal approximation through degree `max_degree()`, stored on free
/// generators, together with its ε ⊗ ε contractions used for cup products.
#[derive(Clone, Debug)]
pub struct DiagonalApproximation {
    group: FiniteGroup,
    k: u32,
    ranks: Vec<usize>,
    /// `values[m][i]` is `Δ(eᵢ)` for the `i`-th generator of `P_m`
    values: Vec<Vec<TensorElement>>,
    /// `contracted[m][i][p]`: `r_p × r_{m−p}` matrix of coefficient sums
    contracted: Vec<Vec<Vec<ModKMatrix>>>,
}

fn part_len(ranks: &[usize], n: usize, m: usize, p: usize) -> usize {
    ranks[p] * n * ranks[m - p] * n
}

/// Builds `Δ` through degree `maxdeg`; needs `res` through `maxdeg`.
pub fn diagonal_approximation(res: &FreeResolution, maxdeg: usize) -> Result<DiagonalApproximation> {
    if maxdeg > res.max_degree() {
        return Err(Error::DegreeOutOfRange {
            degree: maxdeg,
            max: res.max_degree(),
        });
    }
    let n = res.n();
    let g = res.group();
    let mask = mask_of(res.k());
    let ranks = res.ranks()[..=maxdeg].to_vec();
    let hom = if maxdeg > 0 {
        Some(ContractingHomotopy::new(res, maxdeg - 1)?)
    } else {
        None
    };
    let mut values: Vec<Vec<TensorElement>> = vec![vec![vec![{
        let mut v = vec![0u8; n * n];
        v[0] = 1;
        v
    }]]];
    for m in 1..=maxdeg {
        let hom = hom.as_ref().expect("homotopy exists in positive degree");
        let mut level = Vec::with_capacity(ranks[m]);
        let sparse = sparse_level(&values[m - 1]);
        for i in 0..ranks[m] {
            let de = res.boundary(m)?.row(i);
            let z = apply_on(g, &ranks, &sparse, m - 1, de, mask);
            level.push(homotopy(&ranks, n, hom, m, &z, mask));
        }
        values.push(level);
    }
    let contracted = values
        .iter()
        .enumerate()
        .map(|(m, level)| {
            level
                .iter()
                .map(|el| (0..=m).map(|p| contract(res.k(), &ranks, n, m, p, &el[p])).collect())
                .collect()
        })
        .collect();
    Ok(DiagonalApproximation {
        group: g.clone(),
        k: res.k(),
        ranks,
        values,
        contracted,
    })
}

type Sparse = Vec<Vec<Vec<(usize, u8)>>>;

fn sparse_level(gens: &[TensorElement]) -> Sparse {
    gens.iter()
        .map(|el| {
            el.iter()
                .map(|part| part.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i, c)).collect())
                .collect()
        })
        .collect()
}

/// `Σ_{(j,h)} x[(j,h)] · h·Δ(e_j)` in degree `m`.
fn apply_on(g: &FiniteGroup, ranks: &[usize], sparse: &Sparse, m: usize, x: &[u8], mask: u8) -> TensorElement {
    let n = g.order();
    let mut out: TensorElement = (0..=m).map(|p| vec![0u8; part_len(ranks, n, m, p)]).collect();
    for (idx, &c) in x.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let (j, h) = (idx / n, idx % n);
        for p in 0..=m {
            let right = ranks[m - p] * n;
            let part = &mut out[p];
            for &(t, v) in &sparse[j][p] {
                let (xl, yr) = (t / right, t % right);
                let xl2 = (xl / n) * n + g.mul(h, xl % n);
                let yr2 = (yr / n) * n + g.mul(h, yr % n);
                let o = &mut part[xl2 * right + yr2];
                *o = o.wrapping_add(c.wrapping_mul(v)) & mask;
            }
        }
    }
    out
}

/// `H = s ⊗ 1 + ηε ⊗ s` from degree `m − 1` to degree `m`.
fn homotopy(ranks: &[usize], n: usize, hom: &ContractingHomotopy, m: usize, z: &TensorElement, mask: u8) -> TensorElement {
    let mut out: TensorElement = (0..=m).map(|p| vec![0u8; part_len(ranks, n, m, p)]).collect();
    for (p, part) in z.iter().enumerate() {
        let q = m - 1 - p;
        let right = ranks[q] * n;
        let s = &hom.maps[p];
        for (t, &c) in part.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let (xl, yr) = (t / right, t % right);
            // s ⊗ 1 into bidegree (p + 1, q)
            let dst = &mut out[p + 1];
            for (x2, &w) in s.row(xl).iter().enumerate() {
                if w != 0 {
                    let o = &mut dst[x2 * right + yr];
                    *o = o.wrapping_add(c.wrapping_mul(w)) & mask;
                }
            }
            // ηε ⊗ s into bidegree (0, q + 1); ε(h·e₀) = 1
            if p == 0 {
                let dst = &mut out[0];
                for (y2, &w) in hom.maps[q].row(yr).iter().enumerate() {
                    if w != 0 {
                        let o = &mut dst[y2];
                        *o = o.wrapping_add(c.wrapping_mul(w)) & mask;
                    }
                }
            }
        }
    }
    out
}

fn contract(k: u32, ranks: &[usize], n: usize, m: usize, p: usize, part: &[u8]) -> ModKMatrix {
    let (rp, rq) = (ranks[p], ranks[m - p]);
    let right = rq * n;
    let mask = mask_of(k);
    let mut out = ModKMatrix::zero(k, rp, rq);
    for (t, &c) in part.iter().enumerate() {
        if c != 0 {
            let (xl, yr) = (t / right, t % right);
            let (j, l) = (xl / n, yr / n);
            out.set(j, l, out.get(j, l).wrapping_add(c) & mask);
        }
    }
    out
}

impl DiagonalApproximation {
    pub fn max_degree(&self) -> usize {
        self.values.len() - 1
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// `Δ(eᵢ)` for the generator `i` of `P_m`.
    pub fn value(&self, m: usize, i: usize) -> &TensorElement {
        &self.values[m][i]
    }

    /// Coefficient sums of the `(p, m − p)` part of `Δ(eᵢ)` over both
    /// group coordinates.
    pub fn contracted(&self, m: usize, i: usize, p: usize) -> &ModKMatrix {
        &self.contracted[m][i][p]
    }

    /// `Δ(x)` for `x ∈ P_m`.
    pub fn apply(&self, m: usize, x: &[u8]) -> TensorElement {
        apply_on(&self.group, &self.ranks, &sparse_level(&self.values[m]), m, x, mask_of(self.k))
    }

    /// Cup product of cochains `a ∈ C^p`, `b ∈ C^q` with trivial coefficients
    /// ℤ/2^`kc`, `kc ≤ k`: `(a ∪ b)(eᵢ) = (−1)^{pq} Σ Δ(eᵢ)_{(p,q)} a(x) b(y)`.
    pub fn cup_cochains(&self, kc: u32, p: usize, a: &[u8], q: usize, b: &[u8]) -> Result<Vec<u8>> {
        let m = p + q;
        if m > self.max_degree() {
            return Err(Error::DegreeOutOfRange {
                degree: m,
                max: self.max_degree(),
            });
        }
        if kc > self.k || kc == 0 {
            return Err(Error::ModulusTooSmall { need: kc, have: self.k });
        }
        if a.len() != self.ranks[p] || b.len() != self.ranks[q] {
            return Err(Error::IncompatibleOperands("cochain length does not match rank".into()));
        }
        let mask = mask_of(kc);
        let neg = (p * q) % 2 == 1;
        let mut out = Vec::with_capacity(self.ranks[m]);
        for i in 0..self.ranks[m] {
            let t = &self.contracted[m][i][p];
            let mut acc: u8 = 0;
            for (j, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let row = t.row(j);
                let mut inner: u8 = 0;
                for (&c, &y) in row.iter().zip(b) {
                    inner = inner.wrapping_add(c.wrapping_mul(y));
                }
                acc = acc.wrapping_add(x.wrapping_mul(inner));
            }
            if neg {
                acc = acc.wrapping_neg();
            }
            out.push(acc & mask);
        }
        Ok(out)
    }

    /// Verifies `D Δ(eᵢ) = Δ(d eᵢ)` for every generator, and `(ε⊗ε)Δ(e₀) = 1`.
    pub fn check(&self, res: &FreeResolution) -> Result<()> {
        let n = res.n();
        let mask = mask_of(self.k);
        for m in 1..=self.max_degree() {
            for i in 0..self.ranks[m] {
                let el = &self.values[m][i];
                let mut lhs: TensorElement = (0..m).map(|p| vec![0u8; part_len(&self.ranks, n, m - 1, p)]).collect();
                for p in 0..=m {
                    let q = m - p;
                    let right = self.ranks[q] * n;
                    for (t, &c) in el[p].iter().enumerate() {
                        if c == 0 {
                            continue;
                        }
                        let (xl, yr) = (t / right, t % right);
                        if p > 0 {
                            let mut x = vec![0u8; self.ranks[p] * n];
                            x[xl] = 1;
                            let dx = res.apply_boundary(p, &x)?;
                            let rr = right;
                            for (x2, &w) in dx.iter().enumerate() {
                                if w != 0 {
                                    let o = &mut lhs[p - 1][x2 * rr + yr];
                                    *o = o.wrapping_add(c.wrapping_mul(w)) & mask;
                                }
                            }
                        }
                        if q > 0 {
                            let mut y = vec![0u8; right];
                            y[yr] = 1;
                            let dy = res.apply_boundary(q, &y)?;
                            let rr = self.ranks[q - 1] * n;
                            let sc = if p % 2 == 1 { c.wrapping_neg() } else { c };
                            for (y2, &w) in dy.iter().enumerate() {
                                if w != 0 {
                                    let o = &mut lhs[p][xl * rr + y2];
                                    *o = o.wrapping_add(sc.wrapping_mul(w)) & mask;
                                }
                            }
                        }
                    }
                }
                let rhs = self.apply(m - 1, res.boundary(m)?.row(i));
                if lhs != rhs {
                    return Err(Error::Invariant(format!("diagonal is not a chain map in degree {m}")));
                }
            }
        }
        let e0 = &self.values[0][0][0];
        if e0.iter().fold(0u8, |a, &x| a.wrapping_add(x)) & mask != 1 {
            return Err(Error::Invariant("diagonal does not cover the identity".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::builtin;
    use crate::resolution::minimal_resolution;

    #[test]
    fn homotopy_and_diagonal_small_groups() {
        for (name, k) in [("C2", 1), ("C4", 2), ("V4", 1), ("D4", 2), ("Q8", 1)] {
            let g = builtin(name).unwrap();
            let r = minimal_resolution(&g, k, 3).unwrap();
            ContractingHomotopy::new(&r, 2).unwrap().check(&r).unwrap();
            let d = diagonal_approximation(&r, 3).unwrap();
            d.check(&r).unwrap();
        }
    }

    #[test]
    fn c2_cup_square_of_generator() {
        // H*(C2, F2) = F2[x]
        let g = builtin("C2").unwrap();
        let r = minimal_resolution(&g, 1, 4).unwrap();
        let d = diagonal_approximation(&r, 4).unwrap();
        let x = [1u8];
        let x2 = d.cup_cochains(1, 1, &x, 1, &x).unwrap();
        assert_eq!(x2, vec![1]);
        let x3 = d.cup_cochains(1, 1, &x, 2, &x2).unwrap();
        assert_eq!(x3, vec![1]);
    }

    #[test]
    fn c4_degree_one_squares_to_zero() {
        // H*(C4, F2) = Λ(x) ⊗ F2[y], x² = 0
        let g = builtin("C4").unwrap();
        let r = minimal_resolution(&g, 1, 2).unwrap();
        let d = diagonal_approximation(&r, 2).unwrap();
        assert_eq!(d.cup_cochains(1, 1, &[1], 1, &[1]).unwrap(), vec![0]);
    }
}

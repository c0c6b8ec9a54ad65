//! The lattices `N = Im ρ` and `M = Coker ρ` for
//! `ρ : ℤ[G]² → ℤ[G×G]`, `(g,0) ↦ Σ_{g'} (g,g')`, `(0,g) ↦ Σ_{g'} (g',g)`.
//!
//! `ℤ[G×G]` has basis `(g,g')` at index `g·n + g'` with the diagonal left
//! action; `ℤ[G]²` has `(g,0)` at `g` and `(0,g)` at `n + g`.
//!
//! `M` is realized on the classes of `(u,v)`, `u, v ≠ e`: modulo `Im ρ`,
//! `(e,v) ≡ −Σ_{h≠e}(h,v)`, `(u,e) ≡ −Σ_{h≠e}(u,h)`,
//! `(e,e) ≡ Σ_{h,h'≠e}(h,h')`. `N` is realized on the classes of `(g,0)`
//! for all `g` and `(0,g)` for `g ≠ e`, with
//! `(0,e) ≡ Σ(g,0) − Σ_{g≠e}(0,g)`.

use alloc::vec;
use alloc::vec::Vec;

use super::bar::{bar_cohomology, bar_differential, BarCohomology};
use super::coflasque::CoflasqueResolution;
use super::exterior::{exterior_sequence, lambda2};
use super::glattice::{h1_integral, GLattice, LatticeSES};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::int::solve_left_with;
use crate::linalg::IntMatrix;
use crate::subgroup::{subgroup_classes, Subgroup};

/// Largest group order for which `M` and `N` are materialized.
pub const MAX_MNQ_ORDER: usize = 16;

/// `ρ` as an `n² × 2n` matrix (columns are images of basis vectors).
pub fn rho_matrix(g: &FiniteGroup) -> IntMatrix {
    let n = g.order();
    let mut rho = IntMatrix::zero(n * n, 2 * n);
    for a in 0..n {
        for b in 0..n {
            rho.set(a * n + b, a, 1);
            rho.set(b * n + a, n + a, 1);
        }
    }
    rho
}

/// `(γ, −γ)`.
pub fn gamma_vector(n: usize) -> Vec<i64> {
    let mut v = vec![1i64; 2 * n];
    for x in &mut v[n..] {
        *x = -1;
    }
    v
}

/// Image in `M` coordinates of the basis vector `(u,v)` of `ℤ[G×G]`.
fn project(n: usize, u: usize, v: usize) -> Vec<(usize, i64)> {
    let idx = |a: usize, b: usize| (a - 1) * (n - 1) + (b - 1);
    match (u, v) {
        (0, 0) => (1..n).flat_map(|a| (1..n).map(move |b| (idx(a, b), 1))).collect(),
        (0, v) => (1..n).map(|h| (idx(h, v), -1)).collect(),
        (u, 0) => (1..n).map(|h| (idx(u, h), -1)).collect(),
        (u, v) => vec![(idx(u, v), 1)],
    }
}

/// `π : ℤ[G×G] → M`, an `(n−1)² × n²` matrix.
pub fn projection_matrix(n: usize) -> IntMatrix {
    let m = (n - 1) * (n - 1);
    let mut p = IntMatrix::zero(m, n * n);
    for u in 0..n {
        for v in 0..n {
            for (i, c) in project(n, u, v) {
                p.set(i, u * n + v, c);
            }
        }
    }
    p
}

/// `ℤ[G]² → N`, a `(2n−1) × 2n` matrix.
pub fn n_quotient_matrix(n: usize) -> IntMatrix {
    let mut q = IntMatrix::zero(2 * n - 1, 2 * n);
    for i in 0..n {
        q.set(i, i, 1);
    }
    for g in 1..n {
        q.set(n - 1 + g, n + g, 1);
    }
    for g in 0..n {
        q.set(g, n, 1);
    }
    for g in 1..n {
        q.set(n - 1 + g, n, -1);
    }
    q
}

/// Facts about `ρ` that need no lattice materialization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoSummary {
    pub order: usize,
    pub rank_rho: usize,
    pub kernel_rank: usize,
    pub kernel_trivial_action: bool,
    pub rank_m: usize,
    pub torsion_free: bool,
    /// nonzero invariant factors of `ρ`, when the Smith form was computed
    pub invariant_factors: Option<Vec<i64>>,
}

/// Largest order for which [`rho_summary`] also runs a Smith form.
pub const MAX_RHO_SMITH_ORDER: usize = 16;

/// Rank, kernel and cokernel of `ρ`.
///
/// The certificate works for every order: `π ρ = 0` is checked, `π` is
/// the identity on the span `C` of the `(u,v)` with `u, v ≠ e`, and the
/// remaining basis vectors lie in `C + Im ρ` by the identities below. Then
/// `ℤ[G×G] = Im ρ ⊕ C`, so `Im ρ` is saturated of rank `2n−1`, the kernel
/// is spanned by `(γ,−γ)`, and `M ≅ C` is free of rank `(n−1)²`.
pub fn rho_summary(g: &FiniteGroup) -> Result<RhoSummary> {
    let n = g.order();
    let bad = |m: &str| Err(Error::Invariant(alloc::format!("ρ: {m}")));
    if n == 1 {
        return Ok(RhoSummary {
            order: 1,
            rank_rho: 1,
            kernel_rank: 1,
            kernel_trivial_action: true,
            rank_m: 0,
            torsion_free: true,
            invariant_factors: Some(vec![1]),
        });
    }
    // π ρ = 0, column by column
    for a in 0..n {
        let mut row_sum = vec![0i64; (n - 1) * (n - 1)];
        let mut col_sum = vec![0i64; (n - 1) * (n - 1)];
        for b in 0..n {
            for (i, c) in project(n, a, b) {
                row_sum[i] += c;
            }
            for (i, c) in project(n, b, a) {
                col_sum[i] += c;
            }
        }
        if row_sum.iter().chain(&col_sum).any(|&x| x != 0) {
            return bad("π ρ ≠ 0");
        }
    }
    // (u,e) = ρ(u,0) − Σ_{h≠e}(u,h), (e,v) = ρ(0,v) − Σ_{h≠e}(h,v),
    // (e,e) = ρ(e,0) − Σ_{h≠e}(e,h): the remaining basis lies in C + Im ρ.
    // ρ(γ,−γ) = 0 and the action fixes (γ,−γ).
    let gam = gamma_vector(n);
    if rho_matrix_apply(n, &gam).iter().any(|&x| x != 0) {
        return bad("(γ,−γ) is not in the kernel");
    }
    let trivial = (0..n).all(|x| {
        let mut img = vec![0i64; 2 * n];
        for h in 0..n {
            img[g.mul(x, h)] += gam[h];
            img[n + g.mul(x, h)] += gam[n + h];
        }
        img == gam
    });
    let invariant_factors = if n <= MAX_RHO_SMITH_ORDER {
        let f = rho_matrix(g).invariant_factors()?;
        if f.len() != 2 * n - 1 {
            return bad("Smith rank differs from the certificate");
        }
        Some(f)
    } else {
        None
    };
    let torsion_free = invariant_factors.as_ref().is_none_or(|f| f.iter().all(|&d| d == 1));
    Ok(RhoSummary {
        order: n,
        rank_rho: 2 * n - 1,
        kernel_rank: 1,
        kernel_trivial_action: trivial,
        rank_m: (n - 1) * (n - 1),
        torsion_free,
        invariant_factors,
    })
}

fn rho_matrix_apply(n: usize, x: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; n * n];
    for a in 0..n {
        for b in 0..n {
            out[a * n + b] += x[a] + x[n + b];
        }
    }
    out
}

/// `ℤ[G×G]` with the diagonal left action.
pub fn gxg_lattice(g: &FiniteGroup) -> GLattice {
    let n = g.order();
    GLattice::permutation(g, n * n, |x, i| g.mul(x, i / n) * n + g.mul(x, i % n)).expect("diagonal action")
}

#[derive(Clone, Debug)]
pub struct MNQData {
    pub group: FiniteGroup,
    pub rho: IntMatrix,
    pub gamma: Vec<i64>,
    pub x: GLattice,
    pub gxg: GLattice,
    pub n: GLattice,
    pub m: GLattice,
    /// `0 → ℤ → ℤ[G]² → N → 0`
    pub seq_b: LatticeSES,
    /// `0 → N → ℤ[G×G] → M → 0`
    pub seq_a: LatticeSES,
}

pub fn build_mnq(g: &FiniteGroup) -> Result<MNQData> {
    let n = g.order();
    if n > MAX_MNQ_ORDER {
        return Err(Error::BudgetExceeded {
            what: "group order for M, N",
            value: n,
            limit: MAX_MNQ_ORDER,
        });
    }
    let rho = rho_matrix(g);
    let gamma = gamma_vector(n);
    let reg = GLattice::regular(g);
    let x = reg.direct_sum(&reg)?;
    let gxg = gxg_lattice(g);
    let pi = projection_matrix(n);
    let q = n_quotient_matrix(n);
    let m_mats = (0..n)
        .map(|x| {
            let mut a = IntMatrix::zero((n - 1) * (n - 1), (n - 1) * (n - 1));
            for u in 1..n {
                for v in 1..n {
                    let col = (u - 1) * (n - 1) + (v - 1);
                    for (i, c) in project(n, g.mul(x, u), g.mul(x, v)) {
                        a.set(i, col, c);
                    }
                }
            }
            a
        })
        .collect();
    let m = GLattice::from_matrices(g, m_mats)?;
    // N acts through the quotient: A^N_g = q · A^X_g · lift
    let mut lift = IntMatrix::zero(2 * n, 2 * n - 1);
    for i in 0..n {
        lift.set(i, i, 1);
    }
    for h in 1..n {
        lift.set(n + h, n - 1 + h, 1);
    }
    let n_mats = (0..n)
        .map(|y| q.checked_mul(&x.matrix(y).checked_mul(&lift)?))
        .collect::<Result<Vec<_>>>()?;
    let nl = GLattice::from_matrices(g, n_mats)?;
    let seq_b = LatticeSES {
        a: GLattice::trivial(g, 1),
        b: x.clone(),
        c: nl.clone(),
        f: IntMatrix::from_flat(2 * n, 1, gamma.clone()),
        p: q,
    };
    seq_b.verify()?;
    let seq_a = LatticeSES {
        a: nl.clone(),
        b: gxg.clone(),
        c: m.clone(),
        f: rho.checked_mul(&lift)?,
        p: pi,
    };
    seq_a.verify()?;
    let ker = rho.right_kernel()?;
    if ker.rows() != 1 || !(ker.row(0) == gamma.as_slice() || ker.row(0).iter().zip(&gamma).all(|(a, b)| *a == -b)) {
        return Err(Error::Invariant("ker ρ is not spanned by (γ,−γ)".into()));
    }
    Ok(MNQData {
        group: g.clone(),
        rho,
        gamma,
        x,
        gxg,
        n: nl,
        m,
        seq_b,
        seq_a,
    })
}

/// `Q = ker(ℤ[G×G] ⊕ P → M)` for a coflasque resolution `P → M`, with its
/// coflasqueness re-verified.
pub fn build_q(data: &MNQData, cofl: &CoflasqueResolution) -> Result<GLattice> {
    let g = &data.group;
    let big = data.gxg.direct_sum(&cofl.p)?;
    let sum = data.seq_a.p.hstack(&cofl.projection);
    let basis = sum.right_kernel()?;
    let q = big.sublattice(&basis)?;
    for h in subgroup_classes(g, usize::MAX)? {
        if !h1_integral(&q, &h)?.is_empty() {
            return Err(Error::CoflasquenessCheckFailed { order: h.order() });
        }
    }
    Ok(q)
}

/// `H¹(G, Λ²(ℤ[G]²))` computed twice: by the fixed-point formula and from
/// the bar complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeH1 {
    pub fixed_point: Vec<u64>,
    pub bar: BarCohomology,
}

pub fn wedge_pair_h1(g: &FiniteGroup) -> Result<WedgeH1> {
    let reg = GLattice::regular(g);
    let w = lambda2(&reg.direct_sum(&reg)?)?;
    Ok(WedgeH1 {
        fixed_point: h1_integral(&w, &Subgroup::whole(g))?,
        bar: bar_cohomology(&w, 1)?,
    })
}

/// The connecting map `∂ : H¹(G, Λ²N) → H²(G, N)` of
/// `0 → N → Λ²(ℤ[G]²) → Λ²N → 0`, on bar cochains.
#[derive(Clone, Debug)]
pub struct BoundaryMap {
    pub h2_n: BarCohomology,
    /// `∂z` for a basis `z` of `Z¹(G, Λ²N)`
    pub images: Vec<Vec<i64>>,
    pub surjective: bool,
}

pub fn wedge_boundary(data: &MNQData) -> Result<BoundaryMap> {
    let seq = exterior_sequence(&data.seq_b)?;
    let g = &data.group;
    let n = g.order();
    let (rn, rx, ry) = (seq.a.rank(), seq.b.rank(), seq.c.rank());
    let z1 = bar_differential(&seq.c, 1)?.right_kernel()?;
    let psi_t = seq.p.transpose().smith()?;
    let eta_t = seq.f.transpose().smith()?;
    let dx = bar_differential(&seq.b, 1)?;
    let mut images = Vec::with_capacity(z1.rows());
    for z in z1.to_rows() {
        let mut f = Vec::with_capacity(n * rx);
        for h in 0..n {
            let x = solve_left_with(&psi_t, &z[h * ry..(h + 1) * ry])
                .ok_or_else(|| Error::Invariant("Λ²X → Λ²N is not onto".into()))?;
            f.extend(x);
        }
        let df = dx.apply(&f);
        let mut y = Vec::with_capacity(n * n * rn);
        for t in 0..n * n {
            let v = solve_left_with(&eta_t, &df[t * rx..(t + 1) * rx])
                .ok_or_else(|| Error::Invariant("δ of the lift leaves Im η".into()))?;
            y.extend(v);
        }
        images.push(y);
    }
    let z2 = bar_differential(&seq.a, 2)?.right_kernel()?;
    let b2 = bar_differential(&seq.a, 1)?.transpose();
    let mut span = IntMatrix::from_rows(n * n * rn, &images);
    span = span.vstack(&b2);
    let surjective = span.row_span_eq(&z2)?;
    Ok(BoundaryMap {
        h2_n: bar_cohomology(&seq.a, 2)?,
        images,
        surjective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::builtin;

    #[test]
    fn c2_ranks() {
        let g = builtin("C2").unwrap();
        let d = build_mnq(&g).unwrap();
        assert_eq!(d.m.rank(), 1);
        assert_eq!(d.n.rank(), 3);
        // (u,v) = (τ,τ) is fixed by the diagonal action
        assert_eq!(d.m.matrix(1).get(0, 0), 1);
    }

    #[test]
    fn summary_matches_smith() {
        for name in ["C2", "C4", "V4", "D4", "Q8"] {
            let g = builtin(name).unwrap();
            let s = rho_summary(&g).unwrap();
            let n = g.order();
            assert_eq!(s.rank_m, (n - 1) * (n - 1));
            assert!(s.kernel_trivial_action);
            assert!(s.torsion_free);
            assert_eq!(s.invariant_factors.unwrap(), vec![1; 2 * n - 1]);
        }
    }

    #[test]
    fn projection_kills_image() {
        let g = builtin("C4").unwrap();
        let p = projection_matrix(4);
        assert!(p.mul(&rho_matrix(&g)).is_zero());
    }
}

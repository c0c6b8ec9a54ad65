//! Dense matrices over ℤ/2ᵏ for 1 ≤ k ≤ 8.
//!
//! Residues are stored one per byte. Because 2ᵏ divides 256, wrapping `u8`
//! arithmetic followed by a mask is exact arithmetic mod 2ᵏ.
//!
//! Row spans are handled through the Howell form: an echelon form whose
//! pivots are powers of two, with every entry above a pivot reduced into
//! `[0, pivot)`, and which is closed in the sense that every span element
//! vanishing on the first `c` columns is a combination of the rows that vanish
//! there. That closure is what makes reduction-based membership tests (and
//! therefore kernels and solves) correct over a ring that is not a field.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::bits::{BitMatrix, BitSolver, BitVec};

/// Mask selecting residues mod 2ᵏ.
#[inline]
pub fn mask_of(k: u32) -> u8 {
    debug_assert!((1..=8).contains(&k));
    if k == 8 {
        0xff
    } else {
        (1u8 << k) - 1
    }
}

/// 2-adic valuation of a nonzero residue.
#[inline]
pub fn valuation(x: u8) -> u32 {
    x.trailing_zeros()
}

/// Inverse of an odd residue mod 256 (hence mod every 2ᵏ).
#[inline]
pub fn inv_odd(u: u8) -> u8 {
    debug_assert!(u & 1 == 1);
    let mut inv = u;
    for _ in 0..3 {
        inv = inv.wrapping_mul(2u8.wrapping_sub(u.wrapping_mul(inv)));
    }
    inv
}

/// `dst -= f * src`, entrywise mod 2ᵏ.
#[inline]
pub fn axpy_sub(dst: &mut [u8], f: u8, src: &[u8], mask: u8) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d = d.wrapping_sub(f.wrapping_mul(*s)) & mask;
    }
}

/// `dst += f * src`, entrywise mod 2ᵏ.
#[inline]
pub fn axpy_add(dst: &mut [u8], f: u8, src: &[u8], mask: u8) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d = d.wrapping_add(f.wrapping_mul(*s)) & mask;
    }
}

#[inline]
fn scale(row: &mut [u8], f: u8, mask: u8) {
    for x in row.iter_mut() {
        *x = x.wrapping_mul(f) & mask;
    }
}

/// A dense `rows × cols` matrix over ℤ/2ᵏ.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModKMatrix {
    k: u32,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

/// Location and 2-adic valuation of one pivot of an echelon form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pivot {
    pub col: usize,
    pub valuation: u32,
}

/// Result of [`ModKMatrix::echelonize`]: `transform · m = form`.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub form: ModKMatrix,
    pub pivots: Vec<Pivot>,
    pub transform: ModKMatrix,
}

impl ModKMatrix {
    pub fn zero(k: u32, rows: usize, cols: usize) -> Self {
        assert!((1..=8).contains(&k), "modulus exponent must be in 1..=8");
        ModKMatrix {
            k,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(k: u32, n: usize) -> Self {
        let mut m = Self::zero(k, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from rows; entries are reduced mod 2ᵏ.
    pub fn from_rows(k: u32, cols: usize, rows: &[Vec<u8>]) -> Self {
        let mut m = Self::zero(k, rows.len(), cols);
        let mask = mask_of(k);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged row");
            for (j, &x) in r.iter().enumerate() {
                m.data[i * cols + j] = x & mask;
            }
        }
        m
    }

    pub fn from_flat(k: u32, rows: usize, cols: usize, mut data: Vec<u8>) -> Self {
        assert_eq!(data.len(), rows * cols);
        let mask = mask_of(k);
        for x in data.iter_mut() {
            *x &= mask;
        }
        ModKMatrix { k, rows, cols, data }
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }
    #[inline]
    pub fn mask(&self) -> u8 {
        mask_of(self.k)
    }
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: u8) {
        self.data[i * self.cols + j] = x & self.mask();
    }
    #[inline]
    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [u8] {
        let c = self.cols;
        &mut self.data[i * c..(i + 1) * c]
    }
    pub fn as_flat(&self) -> &[u8] {
        &self.data
    }
    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn push_row(&mut self, row: &[u8]) {
        assert_eq!(row.len(), self.cols);
        let mask = self.mask();
        self.data.extend(row.iter().map(|&x| x & mask));
        self.rows += 1;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.k, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    /// Reduces every entry to ℤ/2^`k2` with `k2 ≤ k`.
    pub fn reduce_to(&self, k2: u32) -> Self {
        assert!(k2 <= self.k);
        Self::from_flat(k2, self.rows, self.cols, self.data.clone())
    }

    /// Reinterprets residues mod 2ᵏ as residues mod 2^`k2`, `k2 ≥ k`, via the
    /// representatives in `[0, 2ᵏ)`.
    pub fn lift_to(&self, k2: u32) -> Self {
        assert!(k2 >= self.k);
        ModKMatrix {
            k: k2,
            rows: self.rows,
            cols: self.cols,
            data: self.data.clone(),
        }
    }

    pub fn mul(&self, rhs: &ModKMatrix) -> ModKMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let k = self.k.min(rhs.k);
        let mask = mask_of(k);
        let mut out = Self::zero(k, self.rows, rhs.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for l in 0..self.cols {
                let a = self.data[i * self.cols + l] & mask;
                if a != 0 {
                    axpy_add(orow, a, rhs.row(l), mask);
                }
            }
        }
        out
    }

    /// Row vector times matrix: `x · self`.
    pub fn vec_mul(&self, x: &[u8]) -> Vec<u8> {
        assert_eq!(x.len(), self.rows);
        let mask = self.mask();
        let mut out = vec![0u8; self.cols];
        for (l, &a) in x.iter().enumerate() {
            let a = a & mask;
            if a != 0 {
                axpy_add(&mut out, a, self.row(l), mask);
            }
        }
        out
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &ModKMatrix) -> ModKMatrix {
        assert_eq!(self.rows, rhs.rows);
        let k = self.k.min(rhs.k);
        let cols = self.cols + rhs.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(rhs.row(i));
        }
        Self::from_flat(k, self.rows, cols, data)
    }

    /// Vertical concatenation.
    pub fn vstack(&self, rhs: &ModKMatrix) -> ModKMatrix {
        assert_eq!(self.cols, rhs.cols);
        let k = self.k.min(rhs.k);
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        Self::from_flat(k, self.rows + rhs.rows, self.cols, data)
    }

    /// Canonical row-span form (reduced echelon for k = 1, Howell form for
    /// k > 1) together with the rank profile and a transform.
    pub fn echelonize(&self) -> Echelon {
        if self.k == 1 {
            return self.echelonize_bits();
        }
        let aug = self.hstack(&Self::identity(self.k, self.rows));
        let h = howell(aug.to_rows(), self.k, self.cols, true);
        let mut form = Self::zero(self.k, 0, self.cols);
        let mut transform = Self::zero(self.k, 0, self.rows);
        for r in &h.rows {
            form.push_row(&r[..self.cols]);
            transform.push_row(&r[self.cols..]);
        }
        Echelon {
            form,
            pivots: h.pivots,
            transform,
        }
    }

    fn echelonize_bits(&self) -> Echelon {
        let mut aug = BitMatrix::zero(self.rows, self.cols + self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) & 1 == 1 {
                    aug.set(i, j, true);
                }
            }
            aug.set(i, self.cols + i, true);
        }
        let pivcols = aug.rref_limited(self.cols);
        let mut form = Self::zero(1, 0, self.cols);
        let mut transform = Self::zero(1, 0, self.rows);
        let mut buf = vec![0u8; self.cols + self.rows];
        for i in 0..pivcols.len() {
            for (j, b) in buf.iter_mut().enumerate() {
                *b = aug.get(i, j) as u8;
            }
            form.push_row(&buf[..self.cols]);
            transform.push_row(&buf[self.cols..]);
        }
        Echelon {
            form,
            pivots: pivcols
                .into_iter()
                .map(|col| Pivot { col, valuation: 0 })
                .collect(),
            transform,
        }
    }

    /// Rows generating `{x : x · self = 0}`. Over 𝔽₂ the rows are a basis and
    /// their number is `rows − rank`.
    pub fn kernel_basis(&self) -> ModKMatrix {
        if self.k == 1 {
            let bm = BitMatrix::from_modk(self);
            return bm.left_kernel().to_modk();
        }
        let aug = self.hstack(&Self::identity(self.k, self.rows));
        let h = howell(aug.to_rows(), self.k, aug.cols, true);
        let mut ker = Self::zero(self.k, 0, self.rows);
        for (r, p) in h.rows.iter().zip(&h.pivots) {
            if p.col >= self.cols {
                ker.push_row(&r[self.cols..]);
            }
        }
        ker
    }

    /// Any `x` with `x · self = b`, or `None`.
    pub fn solve(&self, b: &[u8]) -> Option<Vec<u8>> {
        Solver::new(self).solve(b)
    }

    /// Number of elements of the row span, as a power of two.
    pub fn span_log2_order(&self) -> u32 {
        let h = howell(self.to_rows(), self.k, self.cols, false);
        h.pivots.iter().map(|p| self.k - p.valuation).sum()
    }

    /// Rank over 𝔽₂ of the reduction mod 2.
    pub fn rank_mod2(&self) -> usize {
        BitMatrix::from_modk(self).rank()
    }
}

impl fmt::Debug for ModKMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ModKMatrix(2^{}; {}x{})", self.k, self.rows, self.cols)?;
        for i in 0..self.rows.min(16) {
            writeln!(f, "  {:?}", &self.row(i)[..self.cols.min(32)])?;
        }
        Ok(())
    }
}

/// Output of [`howell`]: pivot rows in order of increasing pivot column.
#[derive(Clone, Debug)]
pub struct HowellRows {
    pub rows: Vec<Vec<u8>>,
    pub pivots: Vec<Pivot>,
}

impl HowellRows {
    /// The representative of `v + span` with every pivot entry reduced below
    /// its pivot. For a form computed with `reduce_above` this is a canonical
    /// coset representative.
    pub fn reduce(&self, v: &[u8], k: u32) -> Vec<u8> {
        let mask = mask_of(k);
        let mut out: Vec<u8> = v.iter().map(|&x| x & mask).collect();
        for (r, p) in self.rows.iter().zip(&self.pivots) {
            let f = out[p.col] >> p.valuation;
            if f != 0 {
                let n = out.len();
                axpy_sub(&mut out[p.col..], f, &r[p.col..n], mask);
            }
        }
        out
    }
}

/// Howell form of the span of `rows` over ℤ/2ᵏ, pivoting only in the first
/// `pivot_cols` columns. Rows whose first `pivot_cols` entries vanish at the
/// end are dropped. With `reduce_above` the form is canonical; without it the
/// rows are still closed and remain valid for membership and solving.
///
/// Pivot choice: smallest 2-adic valuation in the column, earliest row on
/// ties, so the output is a deterministic function of the input.
pub fn howell(mut active: Vec<Vec<u8>>, k: u32, pivot_cols: usize, reduce_above: bool) -> HowellRows {
    let mask = mask_of(k);
    let mut out_rows: Vec<Vec<u8>> = Vec::new();
    let mut pivots: Vec<Pivot> = Vec::new();
    for r in active.iter_mut() {
        for x in r.iter_mut() {
            *x &= mask;
        }
    }
    for c in 0..pivot_cols {
        let mut best: Option<(usize, u32)> = None;
        for (i, r) in active.iter().enumerate() {
            let x = r[c];
            if x != 0 {
                let v = valuation(x);
                if best.is_none_or(|(_, bv)| v < bv) {
                    best = Some((i, v));
                    if v == 0 {
                        break;
                    }
                }
            }
        }
        let Some((bi, v)) = best else { continue };
        let mut p = active.remove(bi);
        let unit = p[c] >> v;
        if unit != 1 {
            scale(&mut p[c..], inv_odd(unit), mask);
        }
        for r in active.iter_mut() {
            let x = r[c];
            if x != 0 {
                axpy_sub(&mut r[c..], x >> v, &p[c..], mask);
            }
        }
        if v > 0 {
            let mut q = p.clone();
            scale(&mut q[c..], 1u8 << (k - v), mask);
            if q.iter().any(|&x| x != 0) {
                active.push(q);
            }
        }
        out_rows.push(p);
        pivots.push(Pivot { col: c, valuation: v });
        if active.is_empty() {
            break;
        }
    }
    if reduce_above {
        for i in 0..out_rows.len() {
            let Pivot { col, valuation: v } = pivots[i];
            let (head, tail) = out_rows.split_at_mut(i);
            let pr = &tail[0];
            for r in head.iter_mut() {
                let x = r[col];
                let f = x >> v;
                if f != 0 {
                    axpy_sub(&mut r[col..], f, &pr[col..], mask);
                }
            }
        }
    }
    HowellRows {
        rows: out_rows,
        pivots,
    }
}

/// Precomputed elimination data for solving `x · m = b` repeatedly.
#[derive(Clone, Debug)]
pub struct Solver {
    k: u32,
    cols: usize,
    src: usize,
    inner: SolverKind,
}

#[derive(Clone, Debug)]
enum SolverKind {
    Bits(BitSolver),
    Howell {
        rows: Vec<Vec<u8>>,
        pivots: Vec<Pivot>,
    },
}

impl Solver {
    pub fn new(m: &ModKMatrix) -> Self {
        if m.k == 1 {
            return Solver {
                k: 1,
                cols: m.cols,
                src: m.rows,
                inner: SolverKind::Bits(BitSolver::new(&BitMatrix::from_modk(m))),
            };
        }
        let aug = m.hstack(&ModKMatrix::identity(m.k, m.rows));
        let h = howell(aug.to_rows(), m.k, m.cols, false);
        Solver {
            k: m.k,
            cols: m.cols,
            src: m.rows,
            inner: SolverKind::Howell {
                rows: h.rows,
                pivots: h.pivots,
            },
        }
    }

    /// Builds a solver from Howell rows of `[m | I]` computed with
    /// `pivot_cols ≥ cols`; rows pivoting at or beyond `cols` are dropped.
    pub fn from_howell(k: u32, cols: usize, src: usize, h: &HowellRows) -> Self {
        let mut rows = Vec::new();
        let mut pivots = Vec::new();
        for (r, p) in h.rows.iter().zip(&h.pivots) {
            if p.col < cols {
                rows.push(r[..cols + src].to_vec());
                pivots.push(*p);
            }
        }
        Solver {
            k,
            cols,
            src,
            inner: SolverKind::Howell { rows, pivots },
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Any `x` with `x · m = b`, or `None`.
    pub fn solve(&self, b: &[u8]) -> Option<Vec<u8>> {
        assert_eq!(b.len(), self.cols);
        let (rows, pivots) = match &self.inner {
            SolverKind::Bits(s) => {
                return s.solve(&BitVec::from_residues(b)).map(|x| x.to_residues());
            }
            SolverKind::Howell { rows, pivots } => (rows, pivots),
        };
        let mask = mask_of(self.k);
        let mut rem: Vec<u8> = b.iter().map(|&x| x & mask).collect();
        let mut x = vec![0u8; self.src];
        for (r, p) in rows.iter().zip(pivots) {
            let e = rem[p.col];
            if e == 0 {
                continue;
            }
            if valuation(e) < p.valuation {
                return None;
            }
            let f = e >> p.valuation;
            axpy_sub(&mut rem[p.col..], f, &r[p.col..self.cols], mask);
            axpy_add(&mut x, f, &r[self.cols..], mask);
        }
        rem.iter().all(|&v| v == 0).then_some(x)
    }

    /// Membership of `b` in the row span.
    pub fn contains(&self, b: &[u8]) -> bool {
        self.solve(b).is_some()
    }
}

//! Integer matrices: Smith and Hermite normal forms, kernels, solving.
//!
//! Entries are `i64`. Elimination first runs in checked `i64` arithmetic and
//! reruns in arbitrary precision if any intermediate overflows; results that
//! do not fit back into `i64` are reported as [`Error::Overflow`].

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

/// `u · m · v = diag(factors, 0, …)`; the inverses are kept for coordinate
/// changes.
#[derive(Clone, Debug)]
pub struct Smith {
    pub factors: Vec<i64>,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[Vec<i64>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend_from_slice(r);
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<i64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        IntMatrix { rows, cols, data }
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let mut m = Self::zero(entries.len(), entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m.set(i, i, x);
        }
        m
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
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: i64) {
        self.data[i * self.cols + j] = x;
    }
    #[inline]
    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
    pub fn as_flat(&self) -> &[i64] {
        &self.data
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn push_row(&mut self, r: &[i64]) {
        assert_eq!(r.len(), self.cols);
        self.data.extend_from_slice(r);
        self.rows += 1;
    }

    /// Rows `range` as a new matrix.
    pub fn row_block(&self, from: usize, to: usize) -> IntMatrix {
        IntMatrix::from_flat(to - from, self.cols, self.data[from * self.cols..to * self.cols].to_vec())
    }

    /// Columns `range` as a new matrix.
    pub fn col_block(&self, from: usize, to: usize) -> IntMatrix {
        let mut out = IntMatrix::zero(self.rows, to - from);
        for i in 0..self.rows {
            for j in from..to {
                out.set(i, j - from, self.get(i, j));
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn checked_mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = Self::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(l, j);
                    if b != 0 {
                        let o = &mut out.data[i * rhs.cols + j];
                        *o = a
                            .checked_mul(b)
                            .and_then(|p| o.checked_add(p))
                            .ok_or(Error::Overflow)?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Product; panics on overflow (use [`checked_mul`](Self::checked_mul)
    /// where entries may be large).
    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).expect("integer overflow in matrix product")
    }

    /// `self · x`; panics on overflow.
    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        self.mat_vec(x).expect("integer overflow in matrix-vector product")
    }

    /// `x · self`.
    pub fn vec_mul(&self, x: &[i64]) -> Vec<i64> {
        assert_eq!(x.len(), self.rows);
        let mut out = vec![0i64; self.cols];
        for (l, &a) in x.iter().enumerate() {
            if a != 0 {
                for (o, &b) in out.iter_mut().zip(self.row(l)) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn hstack(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, rhs.rows);
        let mut out = Self::zero(self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..rhs.cols {
                out.set(i, self.cols + j, rhs.get(i, j));
            }
        }
        out
    }

    pub fn vstack(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        IntMatrix::from_flat(self.rows + rhs.rows, self.cols, data)
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, rhs: &IntMatrix) -> IntMatrix {
        let mut out = Self::zero(self.rows + rhs.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
        }
        for i in 0..rhs.rows {
            for j in 0..rhs.cols {
                out.set(self.rows + i, self.cols + j, rhs.get(i, j));
            }
        }
        out
    }

    pub fn smith(&self) -> Result<Smith> {
        let a: Vec<Vec<i64>> = self.to_rows();
        match smith_engine(a, self.rows, self.cols) {
            Some(s) => Ok(s.into_smith()),
            None => {
                let a: Vec<Vec<BigInt>> = self
                    .to_rows()
                    .into_iter()
                    .map(|r| r.into_iter().map(BigInt::from).collect())
                    .collect();
                let s = smith_engine(a, self.rows, self.cols).ok_or(Error::Overflow)?;
                s.try_into_smith()
            }
        }
    }

    /// Nonzero invariant factors `d₁ | d₂ | …`.
    pub fn invariant_factors(&self) -> Result<Vec<i64>> {
        Ok(self.smith()?.factors)
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.smith()?.rank())
    }

    /// Basis of `{x ∈ ℤ^rows : x · self = 0}`; the span is saturated.
    pub fn left_kernel(&self) -> Result<IntMatrix> {
        let s = self.smith()?;
        Ok(s.u.row_block(s.rank(), self.rows))
    }

    /// Basis (as rows) of `{x ∈ ℤ^cols : self · x = 0}`.
    pub fn right_kernel(&self) -> Result<IntMatrix> {
        let s = self.smith()?;
        Ok(s.v.col_block(s.rank(), self.cols).transpose())
    }

    /// Some `x` with `x · self = b`, or `None` if no integral solution exists.
    pub fn solve_left(&self, b: &[i64]) -> Result<Option<Vec<i64>>> {
        let s = self.smith()?;
        Ok(solve_left_with(&s, b))
    }

    /// Row-style Hermite normal form of the row span, zero rows removed.
    /// Two matrices have the same row span iff their forms are equal.
    pub fn hnf(&self) -> Result<IntMatrix> {
        let a = self.to_rows();
        if let Some(h) = hnf_engine(a, self.cols) {
            return Ok(IntMatrix::from_rows(self.cols, &h));
        }
        let a: Vec<Vec<BigInt>> = self
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect();
        let h = hnf_engine(a, self.cols).ok_or(Error::Overflow)?;
        let mut rows = Vec::with_capacity(h.len());
        for r in h {
            rows.push(r.iter().map(|x| x.to_i64().ok_or(Error::Overflow)).collect::<Result<Vec<_>>>()?);
        }
        Ok(IntMatrix::from_rows(self.cols, &rows))
    }

    pub fn row_span_eq(&self, other: &IntMatrix) -> Result<bool> {
        Ok(self.hnf()? == other.hnf()?)
    }

    /// Determinant of a square matrix, via fraction-free elimination.
    pub fn det(&self) -> Result<i64> {
        assert_eq!(self.rows, self.cols);
        let s = self.smith()?;
        if s.rank() < self.rows {
            return Ok(0);
        }
        let mut d: i64 = 1;
        for &f in &s.factors {
            d = d.checked_mul(f).ok_or(Error::Overflow)?;
        }
        // det(u)·det(m)·det(v) = Π factors with det(u), det(v) = ±1
        let su = unimodular_sign(&s.u)?;
        let sv = unimodular_sign(&s.v)?;
        Ok(d * su * sv)
    }
}

/// `x` with `x · m = b` given a Smith decomposition of `m`.
pub fn solve_left_with(s: &Smith, b: &[i64]) -> Option<Vec<i64>> {
    // (x u⁻¹) D = b v
    let bv = s.v.transpose().mat_vec(b)?;
    let r = s.rank();
    if bv[r..].iter().any(|&x| x != 0) {
        return None;
    }
    let mut y = vec![0i64; s.u.rows()];
    for i in 0..r {
        if bv[i] % s.factors[i] != 0 {
            return None;
        }
        y[i] = bv[i] / s.factors[i];
    }
    let x = s.u.transpose().mat_vec(&y)?;
    Some(x)
}

impl IntMatrix {
    /// `self · x` with overflow detection.
    fn mat_vec(&self, x: &[i64]) -> Option<Vec<i64>> {
        assert_eq!(x.len(), self.cols);
        let mut out = vec![0i64; self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            for (j, &xj) in x.iter().enumerate() {
                let a = self.get(i, j);
                if a != 0 && xj != 0 {
                    *o = o.checked_add(a.checked_mul(xj)?)?;
                }
            }
        }
        Some(out)
    }
}

/// Sign of the determinant of a unimodular matrix.
fn unimodular_sign(u: &IntMatrix) -> Result<i64> {
    // Bareiss elimination; the result is ±1 so intermediates stay small
    let n = u.rows;
    let mut a: Vec<Vec<i128>> = (0..n).map(|i| u.row(i).iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return Ok(0);
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j]
                    .checked_mul(a[k][k])
                    .and_then(|x| x.checked_sub(a[i][k].checked_mul(a[k][j])?))
                    .ok_or(Error::Overflow)?;
                a[i][j] = v / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    let d = if n == 0 { 1 } else { a[n - 1][n - 1] } * sign;
    Ok(d.signum() as i64)
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix({}x{})", self.rows, self.cols)?;
        for i in 0..self.rows.min(16) {
            writeln!(f, "  {:?}", &self.row(i)[..self.cols.min(24)])?;
        }
        Ok(())
    }
}

/// Integer arithmetic used by the elimination engines. Every operation
/// reports overflow by returning `None`.
trait Num: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    /// Floor division.
    fn div_floor(&self, o: &Self) -> Option<Self>;
    fn is_negative(&self) -> bool;
    fn cmp_abs(&self, o: &Self) -> Ordering;
    fn divides(&self, o: &Self) -> bool;
}

impl Num for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn div_floor(&self, o: &Self) -> Option<Self> {
        let q = self.checked_div(*o)?;
        if (self % o != 0) && ((*self < 0) != (*o < 0)) {
            q.checked_sub(1)
        } else {
            Some(q)
        }
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn cmp_abs(&self, o: &Self) -> Ordering {
        self.unsigned_abs().cmp(&o.unsigned_abs())
    }
    fn divides(&self, o: &Self) -> bool {
        if *self == 0 {
            *o == 0
        } else {
            o.checked_rem(*self) == Some(0)
        }
    }
}

impl Num for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        BigInt::from(1)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn div_floor(&self, o: &Self) -> Option<Self> {
        Some(num_integer_div_floor(self, o))
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn cmp_abs(&self, o: &Self) -> Ordering {
        self.magnitude().cmp(o.magnitude())
    }
    fn divides(&self, o: &Self) -> bool {
        if Zero::is_zero(self) {
            Zero::is_zero(o)
        } else {
            Zero::is_zero(&(o % self))
        }
    }
}

fn num_integer_div_floor(a: &BigInt, b: &BigInt) -> BigInt {
    let q = a / b;
    let r = a - &q * b;
    if !Zero::is_zero(&r) && (Signed::is_negative(&r) != Signed::is_negative(b)) {
        q - 1
    } else {
        q
    }
}

struct SmithRaw<T> {
    diag: Vec<T>,
    u: Vec<Vec<T>>,
    u_inv: Vec<Vec<T>>,
    v: Vec<Vec<T>>,
    v_inv: Vec<Vec<T>>,
}

fn ident<T: Num>(n: usize) -> Vec<Vec<T>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

/// `row[dst] += q · row[src]`
fn row_axpy<T: Num>(m: &mut [Vec<T>], dst: usize, src: usize, q: &T) -> Option<()> {
    if q.is_zero() {
        return Some(());
    }
    let (a, b) = if dst < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in a.iter_mut().zip(b.iter()) {
        if !y.is_zero() {
            *x = x.add(&q.mul(y)?)?;
        }
    }
    Some(())
}

/// `col[dst] += q · col[src]`
fn col_axpy<T: Num>(m: &mut [Vec<T>], dst: usize, src: usize, q: &T) -> Option<()> {
    if q.is_zero() {
        return Some(());
    }
    for r in m.iter_mut() {
        if !r[src].is_zero() {
            let d = q.mul(&r[src])?;
            r[dst] = r[dst].add(&d)?;
        }
    }
    Some(())
}

fn col_swap<T>(m: &mut [Vec<T>], a: usize, b: usize) {
    for r in m.iter_mut() {
        r.swap(a, b);
    }
}

struct SmithState<T> {
    a: Vec<Vec<T>>,
    u: Vec<Vec<T>>,
    u_inv: Vec<Vec<T>>,
    v: Vec<Vec<T>>,
    v_inv: Vec<Vec<T>>,
}

impl<T: Num> SmithState<T> {
    fn row_add(&mut self, dst: usize, src: usize, q: &T) -> Option<()> {
        row_axpy(&mut self.a, dst, src, q)?;
        row_axpy(&mut self.u, dst, src, q)?;
        // u⁻¹ ← u⁻¹ E⁻¹: col[src] −= q col[dst]
        col_axpy(&mut self.u_inv, src, dst, &q.neg()?)
    }
    fn col_add(&mut self, dst: usize, src: usize, q: &T) -> Option<()> {
        col_axpy(&mut self.a, dst, src, q)?;
        col_axpy(&mut self.v, dst, src, q)?;
        // v⁻¹ ← F⁻¹ v⁻¹: row[src] −= q row[dst]
        row_axpy(&mut self.v_inv, src, dst, &q.neg()?)
    }
    fn row_swap(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap(i, j);
            self.u.swap(i, j);
            col_swap(&mut self.u_inv, i, j);
        }
    }
    fn col_swap(&mut self, i: usize, j: usize) {
        if i != j {
            col_swap(&mut self.a, i, j);
            col_swap(&mut self.v, i, j);
            self.v_inv.swap(i, j);
        }
    }
    fn row_neg(&mut self, i: usize) -> Option<()> {
        for x in self.a[i].iter_mut() {
            *x = x.neg()?;
        }
        for x in self.u[i].iter_mut() {
            *x = x.neg()?;
        }
        for r in self.u_inv.iter_mut() {
            r[i] = r[i].neg()?;
        }
        Some(())
    }
}

fn smith_engine<T: Num>(a: Vec<Vec<T>>, rows: usize, cols: usize) -> Option<SmithRaw<T>> {
    let mut s = SmithState {
        a,
        u: ident(rows),
        u_inv: ident(rows),
        v: ident(cols),
        v_inv: ident(cols),
    };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = &s.a[i][j];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.cmp_abs(&s.a[bi][bj]) == Ordering::Less) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        s.row_swap(t, pi);
        s.col_swap(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if !s.a[i][t].is_zero() {
                    let q = s.a[i][t].div_floor(&s.a[t][t])?.neg()?;
                    s.row_add(i, t, &q)?;
                    if !s.a[i][t].is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                if !s.a[t][j].is_zero() {
                    let q = s.a[t][j].div_floor(&s.a[t][t])?.neg()?;
                    s.col_add(j, t, &q)?;
                    if !s.a[t][j].is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                // move the smallest remainder in row/column t to the pivot
                let mut best = (t, t);
                for i in t + 1..rows {
                    let x = &s.a[i][t];
                    if !x.is_zero() && x.cmp_abs(&s.a[best.0][best.1]) == Ordering::Less {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    let x = &s.a[t][j];
                    if !x.is_zero() && x.cmp_abs(&s.a[best.0][best.1]) == Ordering::Less {
                        best = (t, j);
                    }
                }
                s.row_swap(t, best.0);
                s.col_swap(t, best.1);
                continue;
            }
            // divisibility of the trailing block by the pivot
            let mut bad = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !s.a[t][t].divides(&s.a[i][j]) {
                        bad = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad {
                Some(i) => {
                    s.row_add(t, i, &T::one())?;
                }
                None => break,
            }
        }
        if s.a[t][t].is_negative() {
            s.row_neg(t)?;
        }
        diag.push(s.a[t][t].clone());
        t += 1;
    }
    Some(SmithRaw {
        diag,
        u: s.u,
        u_inv: s.u_inv,
        v: s.v,
        v_inv: s.v_inv,
    })
}

fn to_int_matrix_i64(m: Vec<Vec<i64>>, cols: usize) -> IntMatrix {
    IntMatrix::from_rows(cols, &m)
}

fn to_int_matrix_big(m: Vec<Vec<BigInt>>, cols: usize) -> Result<IntMatrix> {
    let mut rows = Vec::with_capacity(m.len());
    for r in m {
        rows.push(r.iter().map(|x| x.to_i64().ok_or(Error::Overflow)).collect::<Result<Vec<_>>>()?);
    }
    Ok(IntMatrix::from_rows(cols, &rows))
}

impl SmithRaw<i64> {
    fn into_smith(self) -> Smith {
        let nr = self.u.len();
        let nc = self.v.len();
        Smith {
            factors: self.diag,
            u: to_int_matrix_i64(self.u, nr),
            u_inv: to_int_matrix_i64(self.u_inv, nr),
            v: to_int_matrix_i64(self.v, nc),
            v_inv: to_int_matrix_i64(self.v_inv, nc),
        }
    }
}

impl SmithRaw<BigInt> {
    fn try_into_smith(self) -> Result<Smith> {
        let nr = self.u.len();
        let nc = self.v.len();
        Ok(Smith {
            factors: self
                .diag
                .iter()
                .map(|x| x.to_i64().ok_or(Error::Overflow))
                .collect::<Result<Vec<_>>>()?,
            u: to_int_matrix_big(self.u, nr)?,
            u_inv: to_int_matrix_big(self.u_inv, nr)?,
            v: to_int_matrix_big(self.v, nc)?,
            v_inv: to_int_matrix_big(self.v_inv, nc)?,
        })
    }
}

fn hnf_engine<T: Num>(mut a: Vec<Vec<T>>, cols: usize) -> Option<Vec<Vec<T>>> {
    let rows = a.len();
    let mut r = 0;
    let mut pivots: Vec<usize> = Vec::new();
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows {
                if !a[i][c].is_zero() && best.is_none_or(|b| a[i][c].cmp_abs(&a[b][c]) == Ordering::Less) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            a.swap(r, b);
            let mut done = true;
            for i in r + 1..rows {
                if !a[i][c].is_zero() {
                    let q = a[i][c].div_floor(&a[r][c])?.neg()?;
                    row_axpy(&mut a, i, r, &q)?;
                    if !a[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if a.get(r).is_none_or(|row| row[c].is_zero()) {
            continue;
        }
        if a[r][c].is_negative() {
            for x in a[r].iter_mut() {
                *x = x.neg()?;
            }
        }
        for i in 0..r {
            if !a[i][c].is_zero() {
                let q = a[i][c].div_floor(&a[r][c])?.neg()?;
                row_axpy(&mut a, i, r, &q)?;
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Some(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_smith(m: &IntMatrix) -> Smith {
        let s = m.smith().unwrap();
        let prod = |a: &IntMatrix, b: &IntMatrix| -> Vec<Vec<i128>> {
            (0..a.rows())
                .map(|i| {
                    (0..b.cols())
                        .map(|j| (0..a.cols()).map(|l| a.get(i, l) as i128 * b.get(l, j) as i128).sum())
                        .collect()
                })
                .collect()
        };
        let um = prod(&s.u, m);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let dij: i128 = (0..m.cols()).map(|l| um[i][l] * s.v.get(l, j) as i128).sum();
                let want = if i == j && i < s.rank() { s.factors[i] as i128 } else { 0 };
                assert_eq!(dij, want);
            }
        }
        for w in s.factors.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
        let is_id = |p: Vec<Vec<i128>>| p.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, &x)| x == (i == j) as i128));
        assert!(is_id(prod(&s.u, &s.u_inv)));
        assert!(is_id(prod(&s.v, &s.v_inv)));
        s
    }

    #[test]
    fn diag_6_4() {
        let m = IntMatrix::diagonal(&[6, 4]);
        assert_eq!(check_smith(&m).factors, vec![2, 12]);
    }

    #[test]
    fn identity_factors() {
        let s = check_smith(&IntMatrix::identity(4));
        assert_eq!(s.factors, vec![1, 1, 1, 1]);
    }

    #[test]
    fn kernels_and_solve() {
        let m = IntMatrix::from_rows(3, &[vec![2, 4, 6], vec![1, 2, 3], vec![0, 1, 1]]);
        let lk = m.left_kernel().unwrap();
        assert_eq!(lk.rows(), 1);
        assert!(lk.mul(&m).is_zero());
        let rk = m.right_kernel().unwrap();
        assert_eq!(rk.rows(), 1);
        assert!(m.mul(&rk.transpose()).is_zero());
        let b = m.vec_mul(&[3, -1, 2]);
        let x = m.solve_left(&b).unwrap().unwrap();
        assert_eq!(m.vec_mul(&x), b);
        assert!(IntMatrix::diagonal(&[2]).solve_left(&[1]).unwrap().is_none());
    }

    #[test]
    fn hnf_detects_equal_spans() {
        let a = IntMatrix::from_rows(2, &[vec![2, 0], vec![0, 3]]);
        let b = IntMatrix::from_rows(2, &[vec![2, 3], vec![2, 6], vec![4, 3]]);
        assert!(a.row_span_eq(&b).unwrap());
        let c = IntMatrix::from_rows(2, &[vec![1, 0], vec![0, 3]]);
        assert!(!a.row_span_eq(&c).unwrap());
    }

    #[test]
    fn bigint_fallback_on_large_entries() {
        let big = 1i64 << 40;
        let m = IntMatrix::from_rows(2, &[vec![big, big + 1], vec![big - 1, big]]);
        let s = check_smith(&m);
        // det = big² − (big² − 1) = 1
        assert_eq!(s.factors, vec![1, 1]);
        assert_eq!(m.det().unwrap(), 1);
    }

    #[test]
    fn determinant_sign() {
        let m = IntMatrix::from_rows(2, &[vec![0, 1], vec![1, 0]]);
        assert_eq!(m.det().unwrap(), -1);
        assert_eq!(IntMatrix::diagonal(&[2, 3]).det().unwrap(), 6);
    }
}

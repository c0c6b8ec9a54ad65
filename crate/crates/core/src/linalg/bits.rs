//! Bit-packed linear algebra over 𝔽₂.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::modk::ModKMatrix;

const W: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(W)
}

/// A vector over 𝔽₂ packed into `u64` words, low bit first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zero(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zero(len);
        v.set(i, true);
        v
    }

    /// Odd entries become ones.
    pub fn from_residues(xs: &[u8]) -> Self {
        let mut v = Self::zero(xs.len());
        for (i, &x) in xs.iter().enumerate() {
            if x & 1 == 1 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn to_residues(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / W] >> (i % W)) & 1 == 1
    }
    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let m = 1u64 << (i % W);
        if b {
            self.words[i / W] |= m;
        } else {
            self.words[i / W] &= !m;
        }
    }
    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / W] ^= 1u64 << (i % W);
    }
    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }
    pub fn first_one(&self) -> Option<usize> {
        self.first_one_from(0)
    }
    /// Lowest set index ≥ `start`.
    pub fn first_one_from(&self, start: usize) -> Option<usize> {
        if start >= self.len {
            return None;
        }
        let mut wi = start / W;
        let mut w = self.words[wi] & (!0u64 << (start % W));
        loop {
            if w != 0 {
                let i = wi * W + w.trailing_zeros() as usize;
                return (i < self.len).then_some(i);
            }
            wi += 1;
            if wi == self.words.len() {
                return None;
            }
            w = self.words[wi];
        }
    }
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
    pub fn dot(&self, other: &BitVec) -> bool {
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() & 1 == 1
    }
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            core::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * W + b)
                }
            })
        })
    }
    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Dense row-major matrix over 𝔽₂.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_modk(m: &ModKMatrix) -> Self {
        let mut b = Self::zero(m.rows(), m.cols());
        for i in 0..m.rows() {
            for (j, &x) in m.row(i).iter().enumerate() {
                if x & 1 == 1 {
                    b.set(i, j, true);
                }
            }
        }
        b
    }

    pub fn from_rows(cols: usize, rows: &[BitVec]) -> Self {
        let mut m = Self::zero(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols);
            m.row_words_mut(i).copy_from_slice(&r.words);
        }
        m
    }

    pub fn to_modk(&self) -> ModKMatrix {
        let mut data = Vec::with_capacity(self.rows * self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                data.push(self.get(i, j) as u8);
            }
        }
        ModKMatrix::from_flat(1, self.rows, self.cols, data)
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
    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.data[i * self.stride + j / W] >> (j % W)) & 1 == 1
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, b: bool) {
        let w = &mut self.data[i * self.stride + j / W];
        let m = 1u64 << (j % W);
        if b {
            *w |= m;
        } else {
            *w &= !m;
        }
    }
    #[inline]
    fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }
    #[inline]
    fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        let s = self.stride;
        &mut self.data[i * s..(i + 1) * s]
    }

    pub fn row(&self, i: usize) -> BitVec {
        BitVec {
            len: self.cols,
            words: self.row_words(i).to_vec(),
        }
    }

    /// row[dst] ^= row[src]
    #[inline]
    fn xor_rows(&mut self, dst: usize, src: usize) {
        debug_assert_ne!(dst, src);
        let s = self.stride;
        let (a, b) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&mut lo[dst * s..(dst + 1) * s], &hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..(src + 1) * s])
        };
        for (x, y) in a.iter_mut().zip(b) {
            *x ^= *y;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        for w in 0..s {
            self.data.swap(a * s + w, b * s + w);
        }
    }

    /// In-place Gauss–Jordan elimination pivoting only in columns `< limit`.
    /// Afterwards rows `0..rank` are the pivot rows in increasing pivot order
    /// and the remaining rows vanish on the first `limit` columns. Returns
    /// the pivot columns.
    pub fn rref_limited(&mut self, limit: usize) -> Vec<usize> {
        let limit = limit.min(self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..limit {
            if r == self.rows {
                break;
            }
            let (wi, bit) = (c / W, 1u64 << (c % W));
            let Some(p) = (r..self.rows).find(|&i| self.data[i * self.stride + wi] & bit != 0) else {
                continue;
            };
            self.swap_rows(r, p);
            for i in 0..self.rows {
                if i != r && self.data[i * self.stride + wi] & bit != 0 {
                    self.xor_rows(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        self.rref_limited(self.cols)
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    pub fn mul(&self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Self::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                if self.get(i, l) {
                    let s = rhs.stride;
                    let src = &rhs.data[l * s..(l + 1) * s];
                    for (x, y) in out.data[i * s..(i + 1) * s].iter_mut().zip(src) {
                        *x ^= *y;
                    }
                }
            }
        }
        out
    }

    /// `x · self` for a row vector `x`.
    pub fn vec_mul(&self, x: &BitVec) -> BitVec {
        assert_eq!(x.len(), self.rows);
        let mut out = BitVec::zero(self.cols);
        for l in x.ones() {
            for (a, b) in out.words.iter_mut().zip(self.row_words(l)) {
                *a ^= *b;
            }
        }
        out
    }

    /// Basis (in reduced echelon form) of `{x : x · self = 0}`.
    pub fn left_kernel(&self) -> BitMatrix {
        let mut aug = self.augmented_identity();
        let rank = aug.rref_limited(self.cols).len();
        let mut ker = Self::zero(self.rows - rank, self.rows);
        for (o, i) in (rank..self.rows).enumerate() {
            for j in 0..self.rows {
                if aug.get(i, self.cols + j) {
                    ker.set(o, j, true);
                }
            }
        }
        ker.rref();
        ker
    }

    fn augmented_identity(&self) -> BitMatrix {
        let mut aug = Self::zero(self.rows, self.cols + self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    aug.set(i, j, true);
                }
            }
            aug.set(i, self.cols + i, true);
        }
        aug
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix({}x{})", self.rows, self.cols)?;
        for i in 0..self.rows.min(32) {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Repeated solving of `x · m = b` over 𝔽₂.
#[derive(Clone, Debug)]
pub struct BitSolver {
    cols: usize,
    src: usize,
    pivots: Vec<usize>,
    image: Vec<BitVec>,
    preimage: Vec<BitVec>,
}

impl BitSolver {
    pub fn new(m: &BitMatrix) -> Self {
        let mut aug = m.augmented_identity();
        let pivots = aug.rref_limited(m.cols);
        let mut image = Vec::with_capacity(pivots.len());
        let mut preimage = Vec::with_capacity(pivots.len());
        for i in 0..pivots.len() {
            let mut a = BitVec::zero(m.cols);
            let mut b = BitVec::zero(m.rows);
            let r = aug.row(i);
            for j in r.ones() {
                if j < m.cols {
                    a.set(j, true);
                } else {
                    b.set(j - m.cols, true);
                }
            }
            image.push(a);
            preimage.push(b);
        }
        BitSolver {
            cols: m.cols,
            src: m.rows,
            pivots,
            image,
            preimage,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn solve(&self, b: &BitVec) -> Option<BitVec> {
        assert_eq!(b.len(), self.cols);
        let mut rem = b.clone();
        let mut x = BitVec::zero(self.src);
        for ((&c, a), p) in self.pivots.iter().zip(&self.image).zip(&self.preimage) {
            if rem.get(c) {
                rem.xor_assign(a);
                x.xor_assign(p);
            }
        }
        rem.is_zero().then_some(x)
    }
}

/// A subspace of 𝔽₂ⁿ held by its reduced echelon basis, which is unique;
/// equality of subspaces is equality of values.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<BitVec>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::spanned_by(ambient, (0..ambient).map(|i| BitVec::unit(ambient, i)))
    }

    pub fn spanned_by<I: IntoIterator<Item = BitVec>>(ambient: usize, vs: I) -> Self {
        let mut s = Self::zero(ambient);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.rows.len()
    }
    pub fn basis(&self) -> &[BitVec] {
        &self.rows
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residue of `v` after clearing every pivot column.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut r = v.clone();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            if r.get(c) {
                r.xor_assign(row);
            }
        }
        r
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        assert_eq!(v.len(), self.ambient);
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: BitVec) -> bool {
        assert_eq!(v.len(), self.ambient);
        let r = self.reduce(&v);
        let Some(c) = r.first_one() else {
            return false;
        };
        for row in self.rows.iter_mut() {
            if row.get(c) {
                row.xor_assign(&r);
            }
        }
        let at = self.pivots.partition_point(|&p| p < c);
        self.pivots.insert(at, c);
        self.rows.insert(at, r);
        true
    }

    pub fn join(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for v in &other.rows {
            s.insert(v.clone());
        }
        s
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|v| other.contains(v))
    }

    /// Coordinates of a member with respect to the canonical basis.
    pub fn coordinates(&self, v: &BitVec) -> Option<BitVec> {
        if !self.contains(v) {
            return None;
        }
        let mut c = BitVec::zero(self.dim());
        for (i, &p) in self.pivots.iter().enumerate() {
            if v.get(p) {
                c.set(i, true);
            }
        }
        Some(c)
    }

    /// Basis rows as 0/1 arrays.
    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.rows.iter().map(|r| r.to_residues()).collect()
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}) {:?}", self.dim(), self.ambient, self.rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitvec_basics() {
        let mut v = BitVec::zero(130);
        v.set(0, true);
        v.set(64, true);
        v.set(129, true);
        assert_eq!(v.count_ones(), 3);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(v.first_one_from(1), Some(64));
        assert_eq!(v.first_one_from(65), Some(129));
        v.flip(129);
        assert_eq!(v.first_one_from(65), None);
    }

    #[test]
    fn rank_and_kernel() {
        let mut m = BitMatrix::zero(3, 3);
        m.set(0, 0, true);
        m.set(0, 1, true);
        m.set(1, 1, true);
        m.set(1, 2, true);
        m.set(2, 0, true);
        m.set(2, 2, true);
        assert_eq!(m.rank(), 2);
        let k = m.left_kernel();
        assert_eq!(k.rows(), 1);
        assert!(m.vec_mul(&k.row(0)).is_zero());
    }

    #[test]
    fn subspace_insert_keeps_rref() {
        let mut s = Subspace::zero(4);
        assert!(s.insert(BitVec::from_residues(&[0, 1, 1, 0])));
        assert!(s.insert(BitVec::from_residues(&[1, 1, 0, 0])));
        assert!(!s.insert(BitVec::from_residues(&[1, 0, 1, 0])));
        assert_eq!(s.pivots(), &[0, 1]);
        assert_eq!(s.to_rows(), vec![vec![1, 0, 1, 0], vec![0, 1, 1, 0]]);
    }

    #[test]
    fn solver_round_trip() {
        let mut m = BitMatrix::zero(2, 3);
        m.set(0, 0, true);
        m.set(1, 0, true);
        m.set(1, 2, true);
        let s = BitSolver::new(&m);
        let b = BitVec::from_residues(&[0, 0, 1]);
        let x = s.solve(&b).unwrap();
        assert_eq!(m.vec_mul(&x), b);
        assert!(s.solve(&BitVec::from_residues(&[0, 1, 0])).is_none());
    }
}

//! Finite groups given by multiplication tables.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// A finite group with elements `0..n`, identity `0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<u16>,
    inv: Vec<u16>,
    orders: Vec<u32>,
}

impl FiniteGroup {
    /// Validates a Cayley table. The identity must be element 0.
    pub fn from_cayley_table(table: &[Vec<usize>]) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        if n > u16::MAX as usize {
            return Err(Error::NotAGroup(format!("order {n} too large")));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotAGroup(format!("row {i} has length {} (expected {n})", row.len())));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return Err(Error::NotAGroup(format!("entry {x} in row {i} out of range")));
            }
        }
        let mut seen = vec![false; n];
        for (i, row) in table.iter().enumerate() {
            seen.iter_mut().for_each(|s| *s = false);
            for &x in row {
                if core::mem::replace(&mut seen[x], true) {
                    return Err(Error::NotAGroup(format!("row {i} is not a permutation")));
                }
            }
        }
        for j in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for row in table {
                if core::mem::replace(&mut seen[row[j]], true) {
                    return Err(Error::NotAGroup(format!("column {j} is not a permutation")));
                }
            }
        }
        let is_identity = |e: usize| (0..n).all(|g| table[e][g] == g && table[g][e] == g);
        if !is_identity(0) {
            return Err(if (1..n).any(is_identity) {
                Error::IdentityNotZero
            } else {
                Error::NotAGroup("no two-sided identity".into())
            });
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::NotAGroup(format!("associativity fails at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        let flat: Vec<u16> = table.iter().flat_map(|r| r.iter().map(|&x| x as u16)).collect();
        Ok(Self::from_flat_unchecked(n, flat))
    }

    fn from_flat_unchecked(n: usize, table: Vec<u16>) -> Self {
        let mut inv = vec![0u16; n];
        for g in 0..n {
            inv[g] = (0..n).find(|&h| table[g * n + h] == 0).expect("latin square") as u16;
        }
        let mut orders = vec![0u32; n];
        for g in 0..n {
            let mut x = g;
            let mut k = 1;
            while x != 0 {
                x = table[x * n + g] as usize;
                k += 1;
            }
            orders[g] = k;
        }
        FiniteGroup { n, table, inv, orders }
    }

    /// Builds a group from a multiplication law on `0..n` that is known to
    /// be a group law with identity 0.
    pub(crate) fn from_law(n: usize, law: impl Fn(usize, usize) -> usize) -> Self {
        let mut t = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                t.push(law(a, b) as u16);
            }
        }
        Self::from_flat_unchecked(n, t)
    }

    pub fn trivial() -> Self {
        Self::from_law(1, |_, _| 0)
    }

    pub fn cyclic(n: usize) -> Self {
        Self::from_law(n, |a, b| (a + b) % n)
    }

    /// Elements `(a, b)` indexed `a · |H| + b`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let m = h.n;
        Self::from_law(g.n * m, |x, y| g.mul(x / m, y / m) * m + h.mul(x % m, y % m))
    }

    /// Dihedral group of order `2m`: `rⁱsʲ` indexed `i + m·j`.
    pub fn dihedral(m: usize) -> Self {
        Self::from_law(2 * m, |x, y| {
            let (i, j) = (x % m, x / m);
            let (k, l) = (y % m, y / m);
            let e = if j == 0 { (i + k) % m } else { (i + m - k) % m };
            e + m * ((j + l) % 2)
        })
    }

    /// Generalised quaternion (dicyclic) group of order `4m`:
    /// `⟨a, b | a²ᵐ, b² = aᵐ, bab⁻¹ = a⁻¹⟩`, element `aⁱbʲ` indexed
    /// `i + 2m·j`.
    pub fn dicyclic(m: usize) -> Self {
        let c = 2 * m;
        Self::from_law(2 * c, |x, y| {
            let (i, j) = (x % c, x / c);
            let (k, l) = (y % c, y / c);
            if j == 0 {
                (i + k) % c + c * l
            } else if l == 0 {
                (i + c - k) % c + c
            } else {
                (i + c - k + m) % c
            }
        })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }
    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }
    #[inline]
    pub fn element_order(&self, a: usize) -> usize {
        self.orders[a] as usize
    }
    pub fn element_orders(&self) -> Vec<usize> {
        self.orders.iter().map(|&o| o as usize).collect()
    }
    pub fn pow(&self, a: usize, k: usize) -> usize {
        let mut x = 0;
        for _ in 0..k % self.element_order(a) {
            x = self.mul(x, a);
        }
        x
    }
    /// `g x g⁻¹`
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }
    /// `a b a⁻¹ b⁻¹`
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|a| (0..self.n).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Exponent `k` with `|G| = 2ᵏ`, or [`Error::NotA2Group`].
    pub fn log2_order(&self) -> Result<u32> {
        if let Some(g) = (0..self.n).find(|&g| !self.element_order(g).is_power_of_two()) {
            return Err(Error::NotA2Group {
                element: g,
                order: self.element_order(g),
            });
        }
        Ok(self.n.trailing_zeros())
    }

    pub fn is_2group(&self) -> bool {
        self.n.is_power_of_two() && self.log2_order().is_ok()
    }

    pub fn num_involutions(&self) -> usize {
        (1..self.n).filter(|&g| self.element_order(g) == 2).count()
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&z| (0..self.n).all(|g| self.mul(z, g) == self.mul(g, z)))
            .collect()
    }

    /// Sorted elements of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.n];
        inside[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = self.mul(x, s);
                if !inside[y] {
                    inside[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.n).filter(|&g| inside[g]).collect()
    }

    /// Elements of the derived subgroup `[G, G]`.
    pub fn derived_subgroup(&self) -> Vec<usize> {
        let mut comms: Vec<usize> = Vec::new();
        let mut seen = vec![false; self.n];
        for a in 0..self.n {
            for b in 0..self.n {
                let c = self.commutator(a, b);
                if !seen[c] {
                    seen[c] = true;
                    comms.push(c);
                }
            }
        }
        self.closure(&comms)
    }

    /// A generating set found greedily: repeatedly adjoin the smallest
    /// element outside the span so far. Deterministic.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![0usize];
        while span.len() < self.n {
            let mut inside = vec![false; self.n];
            for &x in &span {
                inside[x] = true;
            }
            // prefer elements of largest order so the set tends to be small
            let g = (1..self.n)
                .filter(|&g| !inside[g])
                .max_by_key(|&g| (self.element_order(g), core::cmp::Reverse(g)))
                .expect("span is proper");
            gens.push(g);
            span = self.closure(&gens);
        }
        gens
    }

    /// Invariant factors (each > 1, dividing chain) of `G/[G,G]`.
    pub fn abelianization(&self) -> Result<Vec<u64>> {
        let d = self.derived_subgroup();
        // coset label of every element
        let mut label = vec![usize::MAX; self.n];
        let mut reps = Vec::new();
        for g in 0..self.n {
            if label[g] == usize::MAX {
                let c = reps.len();
                reps.push(g);
                for &x in &d {
                    label[self.mul(g, x)] = c;
                }
            }
        }
        let q = reps.len();
        if q == 1 {
            return Ok(Vec::new());
        }
        let gens = self.generators();
        let s = gens.len();
        // spanning tree of the Cayley graph of G/[G,G] gives a word for every coset
        let mut word: Vec<Option<Vec<i64>>> = vec![None; q];
        word[label[0]] = Some(vec![0; s]);
        let mut queue = VecDeque::from([0usize]);
        let mut relations: Vec<Vec<i64>> = Vec::new();
        while let Some(c) = queue.pop_front() {
            let wc = word[c].clone().expect("visited");
            for (i, &g) in gens.iter().enumerate() {
                let t = label[self.mul(reps[c], g)];
                let mut w = wc.clone();
                w[i] += 1;
                match &word[t] {
                    None => {
                        word[t] = Some(w);
                        queue.push_back(t);
                    }
                    Some(wt) => {
                        let rel: Vec<i64> = w.iter().zip(wt).map(|(a, b)| a - b).collect();
                        if rel.iter().any(|&x| x != 0) {
                            relations.push(rel);
                        }
                    }
                }
            }
        }
        let m = IntMatrix::from_rows(s, &relations);
        let f = m.invariant_factors()?;
        if f.len() != s {
            return Err(Error::Invariant("abelianization relation lattice is not of full rank".into()));
        }
        Ok(f.into_iter().filter(|&x| x > 1).map(|x| x as u64).collect())
    }
}

/// Names accepted by [`builtin`], in a stable order.
pub const BUILTIN_NAMES: &[&str] = &[
    "trivial", "C2", "C3", "C4", "C8", "C16", "V4", "C4xC2", "C2^3", "D4", "Q8", "D8", "Q16", "C4xC4", "sz8-sylow",
];

/// The small 2-groups used as negative controls.
pub const NEGATIVE_SUITE: &[&str] = &[
    "C2", "C4", "C8", "C16", "V4", "C4xC2", "C2^3", "D4", "Q8", "D8", "Q16", "C4xC4",
];

/// Built-in groups. `D4` is dihedral of order 8, `D8` of order 16; `Q16` is
/// generalised quaternion of order 16.
pub fn builtin(name: &str) -> Option<FiniteGroup> {
    let c = FiniteGroup::cyclic;
    Some(match name {
        "trivial" | "C1" => FiniteGroup::trivial(),
        "C2" => c(2),
        "C3" => c(3),
        "C4" => c(4),
        "C8" => c(8),
        "C16" => c(16),
        "V4" | "C2xC2" => FiniteGroup::direct_product(&c(2), &c(2)),
        "C4xC2" => FiniteGroup::direct_product(&c(4), &c(2)),
        "C2^3" | "C2xC2xC2" => FiniteGroup::direct_product(&FiniteGroup::direct_product(&c(2), &c(2)), &c(2)),
        "D4" => FiniteGroup::dihedral(4),
        "Q8" => FiniteGroup::dicyclic(2),
        "D8" => FiniteGroup::dihedral(8),
        "Q16" => FiniteGroup::dicyclic(4),
        "C4xC4" => FiniteGroup::direct_product(&c(4), &c(4)),
        "sz8-sylow" => crate::f8::sylow2_sz8(),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_associative(g: &FiniteGroup) {
        let n = g.order();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn tiny_tables() {
        let g = FiniteGroup::from_cayley_table(&[vec![0]]).unwrap();
        assert_eq!(g.order(), 1);
        let c2 = FiniteGroup::from_cayley_table(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(c2.num_involutions(), 1);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(matches!(
            FiniteGroup::from_cayley_table(&[vec![1, 0], vec![0, 1]]),
            Err(Error::IdentityNotZero)
        ));
        assert!(matches!(
            FiniteGroup::from_cayley_table(&[vec![0, 1], vec![1, 1]]),
            Err(Error::NotAGroup(_))
        ));
        assert!(matches!(
            FiniteGroup::from_cayley_table(&[vec![0, 1], vec![1]]),
            Err(Error::NotAGroup(_))
        ));
        // a latin square with identity 0 that is not associative
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(FiniteGroup::from_cayley_table(&t), Err(Error::NotAGroup(_))));
    }

    #[test]
    fn builtins_are_groups() {
        for name in BUILTIN_NAMES {
            let g = builtin(name).unwrap();
            if g.order() <= 16 {
                assert_associative(&g);
            }
            let again = FiniteGroup::from_cayley_table(&g.table()).unwrap();
            assert_eq!(again, g);
        }
    }

    #[test]
    fn abelian_invariants() {
        assert_eq!(builtin("C4").unwrap().abelianization().unwrap(), vec![4]);
        assert_eq!(builtin("Q8").unwrap().abelianization().unwrap(), vec![2, 2]);
        assert_eq!(builtin("D4").unwrap().abelianization().unwrap(), vec![2, 2]);
        assert_eq!(builtin("C4xC2").unwrap().abelianization().unwrap(), vec![2, 4]);
        assert_eq!(builtin("trivial").unwrap().abelianization().unwrap(), Vec::<u64>::new());
        assert_eq!(builtin("C3").unwrap().abelianization().unwrap(), vec![3]);
    }

    #[test]
    fn quaternion_structure() {
        let q8 = builtin("Q8").unwrap();
        assert_eq!(q8.num_involutions(), 1);
        assert_eq!(q8.center().len(), 2);
        let q16 = builtin("Q16").unwrap();
        assert_eq!(q16.num_involutions(), 1);
        let d8 = builtin("D8").unwrap();
        assert_eq!(d8.num_involutions(), 9);
    }

    #[test]
    fn two_group_detection() {
        assert!(builtin("D8").unwrap().is_2group());
        assert!(matches!(builtin("C3").unwrap().log2_order(), Err(Error::NotA2Group { .. })));
    }
}

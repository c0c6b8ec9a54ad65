//! Subgroups and the catalogue of subgroup conjugacy classes.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// Largest group order for which subgroups are enumerated.
pub const MAX_ENUM_ORDER: usize = 256;

/// Default cap on the number of conjugacy classes.
pub const DEFAULT_CLASS_CAP: usize = 10_000;

type Mask = [u64; 4];

fn mask_of(elements: &[usize]) -> Mask {
    let mut m = [0u64; 4];
    for &g in elements {
        m[g / 64] |= 1 << (g % 64);
    }
    m
}

/// A subgroup of a fixed parent group. Operations needing the multiplication
/// take the parent explicitly.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subgroup {
    parent_order: usize,
    elements: Vec<usize>,
    coset_reps: Vec<usize>,
}

impl Subgroup {
    /// The subgroup with the given elements; `None` unless they form a
    /// subgroup of `g`.
    pub fn from_elements(g: &FiniteGroup, elements: &[usize]) -> Option<Self> {
        let mut els: Vec<usize> = elements.to_vec();
        els.sort_unstable();
        els.dedup();
        if els.first() != Some(&0) || els.iter().any(|&x| x >= g.order()) {
            return None;
        }
        let mut inside = vec![false; g.order()];
        for &x in &els {
            inside[x] = true;
        }
        for &a in &els {
            for &b in &els {
                if !inside[g.mul(a, b)] {
                    return None;
                }
            }
        }
        Some(Self::from_sorted_unchecked(g, els))
    }

    fn from_sorted_unchecked(g: &FiniteGroup, elements: Vec<usize>) -> Self {
        let n = g.order();
        let mut covered = vec![false; n];
        let mut reps = Vec::with_capacity(n / elements.len());
        for t in 0..n {
            if !covered[t] {
                reps.push(t);
                for &h in &elements {
                    covered[g.mul(t, h)] = true;
                }
            }
        }
        Subgroup {
            parent_order: n,
            elements,
            coset_reps: reps,
        }
    }

    pub fn generated_by(g: &FiniteGroup, gens: &[usize]) -> Self {
        Self::from_sorted_unchecked(g, g.closure(gens))
    }

    pub fn whole(g: &FiniteGroup) -> Self {
        Self::from_sorted_unchecked(g, (0..g.order()).collect())
    }

    pub fn trivial(g: &FiniteGroup) -> Self {
        Self::from_sorted_unchecked(g, vec![0])
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
    pub fn index(&self) -> usize {
        self.coset_reps.len()
    }
    pub fn parent_order(&self) -> usize {
        self.parent_order
    }
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }
    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }
    /// Position of `x` among the sorted elements.
    pub fn local_index(&self, x: usize) -> Option<usize> {
        self.elements.binary_search(&x).ok()
    }

    /// Left-coset representatives `t` (`G = ⊔ tH`), each the smallest
    /// element of its coset; the first is 0.
    pub fn coset_reps(&self) -> &[usize] {
        &self.coset_reps
    }

    /// Right-coset representatives `t⁻¹` (`G = ⊔ Ht⁻¹`), in the order of
    /// [`coset_reps`](Self::coset_reps).
    pub fn right_coset_reps(&self, g: &FiniteGroup) -> Vec<usize> {
        self.coset_reps.iter().map(|&t| g.inv(t)).collect()
    }

    /// `x H x⁻¹`
    pub fn conjugate(&self, g: &FiniteGroup, x: usize) -> Subgroup {
        let mut els: Vec<usize> = self.elements.iter().map(|&h| g.conj(x, h)).collect();
        els.sort_unstable();
        Self::from_sorted_unchecked(g, els)
    }

    /// The subgroup as a group in its own right: element `i` is
    /// `elements()[i]`, so the identity stays at index 0.
    pub fn as_group(&self, g: &FiniteGroup) -> FiniteGroup {
        FiniteGroup::from_law(self.order(), |a, b| {
            self.local_index(g.mul(self.elements[a], self.elements[b]))
                .expect("closed under multiplication")
        })
    }

    /// The conjugate with the lexicographically smallest element list.
    pub fn canonical_conjugate(&self, g: &FiniteGroup) -> Subgroup {
        let mut best: Option<Vec<usize>> = None;
        let mut seen: BTreeSet<Mask> = BTreeSet::new();
        for x in 0..g.order() {
            let mut els: Vec<usize> = self.elements.iter().map(|&h| g.conj(x, h)).collect();
            els.sort_unstable();
            if !seen.insert(mask_of(&els)) {
                continue;
            }
            if best.as_ref().is_none_or(|b| els < *b) {
                best = Some(els);
            }
        }
        Self::from_sorted_unchecked(g, best.expect("at least one conjugate"))
    }

    /// All distinct conjugates.
    pub fn conjugacy_class(&self, g: &FiniteGroup) -> Vec<Subgroup> {
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        for x in 0..g.order() {
            let mut els: Vec<usize> = self.elements.iter().map(|&h| g.conj(x, h)).collect();
            els.sort_unstable();
            seen.insert(els);
        }
        seen.into_iter().map(|e| Self::from_sorted_unchecked(g, e)).collect()
    }
}

/// One representative per conjugacy class of subgroups, sorted by
/// `(order, element list)`. Each representative is the canonical conjugate.
///
/// Classes are found by layered closure: start from the cyclic subgroups and
/// repeatedly join every class representative with one more element. If
/// `K = ⟨H', g⟩` with `H' = xHx⁻¹` then `x⁻¹Kx = ⟨H, x⁻¹gx⟩`, so every class
/// is reached from representatives alone.
pub fn subgroup_classes(g: &FiniteGroup, cap: usize) -> Result<Vec<Subgroup>> {
    let n = g.order();
    if n > MAX_ENUM_ORDER {
        return Err(Error::BudgetExceeded {
            what: "group order for subgroup enumeration",
            value: n,
            limit: MAX_ENUM_ORDER,
        });
    }
    let mut found: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
    let mut frontier: Vec<Subgroup> = Vec::new();
    fn add(
        g: &FiniteGroup,
        s: Subgroup,
        cap: usize,
        found: &mut BTreeSet<(usize, Vec<usize>)>,
        frontier: &mut Vec<Subgroup>,
    ) -> Result<()> {
        let c = s.canonical_conjugate(g);
        if found.insert((c.order(), c.elements.clone())) {
            if found.len() > cap {
                return Err(Error::BudgetExceeded {
                    what: "subgroup conjugacy classes",
                    value: found.len(),
                    limit: cap,
                });
            }
            frontier.push(c);
        }
        Ok(())
    }
    for x in 0..n {
        add(g, Subgroup::generated_by(g, &[x]), cap, &mut found, &mut frontier)?;
    }
    while !frontier.is_empty() {
        let layer = core::mem::take(&mut frontier);
        for h in layer {
            let gens = small_generating_set(g, &h.elements);
            let mut tried: BTreeSet<Mask> = BTreeSet::new();
            for x in 0..n {
                if h.contains(x) {
                    continue;
                }
                let mut gs = gens.clone();
                gs.push(x);
                let k = g.closure(&gs);
                if tried.insert(mask_of(&k)) {
                    add(g, Subgroup::from_sorted_unchecked(g, k), cap, &mut found, &mut frontier)?;
                }
            }
        }
    }
    Ok(found
        .into_iter()
        .map(|(_, e)| Subgroup::from_sorted_unchecked(g, e))
        .collect())
}

fn small_generating_set(g: &FiniteGroup, elements: &[usize]) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = vec![0usize];
    for &x in elements.iter().rev() {
        if span.binary_search(&x).is_err() {
            gens.push(x);
            span = g.closure(&gens);
        }
    }
    gens
}

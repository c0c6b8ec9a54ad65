//! The field 𝔽₈ = 𝔽₂[t]/(t³ + t + 1) and the 2-Sylow subgroup of Sz(8).
//!
//! The Sylow subgroup is the set of pairs `S(a, b)`, `a, b ∈ 𝔽₈`, with
//! `S(a,b)·S(c,d) = S(a + c, θ(a)c + b + d)` where `θ(a) = a⁴`. Any
//! irreducible cubic gives an isomorphic group; t³ + t + 1 is fixed here so
//! element numbering is reproducible.

use core::fmt;
use core::ops::{Add, Mul};

use crate::group::FiniteGroup;

/// An element of 𝔽₈ as a polynomial in `t` of degree < 3 (bit `i` ↔ `tⁱ`).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct F8(u8);

impl F8 {
    pub const ZERO: F8 = F8(0);
    pub const ONE: F8 = F8(1);
    /// The class of `t`, a generator of 𝔽₈ˣ.
    pub const T: F8 = F8(2);

    pub fn new(bits: u8) -> Self {
        assert!(bits < 8, "F8 element needs 3 bits");
        F8(bits)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = F8> {
        (0..8).map(F8)
    }

    pub fn pow(self, mut e: u32) -> F8 {
        let mut base = self;
        let mut acc = F8::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// The automorphism `a ↦ a⁴`.
    pub fn theta(self) -> F8 {
        self.pow(4)
    }

    pub fn inverse(self) -> Option<F8> {
        (self.0 != 0).then(|| self.pow(6))
    }
}

impl Add for F8 {
    type Output = F8;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, o: F8) -> F8 {
        F8(self.0 ^ o.0)
    }
}

impl Mul for F8 {
    type Output = F8;
    fn mul(self, o: F8) -> F8 {
        let mut acc: u8 = 0;
        for i in 0..3 {
            if (o.0 >> i) & 1 == 1 {
                acc ^= self.0 << i;
            }
        }
        // reduce by t³ = t + 1
        for i in (3..5).rev() {
            if (acc >> i) & 1 == 1 {
                acc ^= 0b1011 << (i - 3);
            }
        }
        F8(acc)
    }
}

impl fmt::Debug for F8 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F8({:03b})", self.0)
    }
}

/// Index of `S(a, b)`: lexicographic in `(a.bits, b.bits)`.
#[inline]
pub fn sz8_index(a: F8, b: F8) -> usize {
    a.0 as usize * 8 + b.0 as usize
}

#[inline]
pub fn sz8_pair(i: usize) -> (F8, F8) {
    (F8((i / 8) as u8), F8((i % 8) as u8))
}

/// The 2-Sylow subgroup of Sz(8), order 64.
pub fn sylow2_sz8() -> FiniteGroup {
    FiniteGroup::from_law(64, |x, y| {
        let (a, b) = sz8_pair(x);
        let (c, d) = sz8_pair(y);
        sz8_index(a + c, a.theta() * c + b + d)
    })
}

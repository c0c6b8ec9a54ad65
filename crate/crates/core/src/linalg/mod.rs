//! Exact linear algebra over 𝔽₂, ℤ/2ᵏ and ℤ.

pub mod bits;
pub mod int;
pub mod modk;

pub use bits::{BitMatrix, BitSolver, BitVec, Subspace};
pub use int::{IntMatrix, Smith};
pub use modk::{Echelon, ModKMatrix, Pivot, Solver};

#![no_std]
//! Exact computations for the cohomological criterion of non-vanishing of
//! Φ(G, M): finite 2-groups, minimal resolutions over (ℤ/2ᴷ)[G], cup
//! products, Bocksteins, transfers, and integral G-lattices.

extern crate alloc;

pub mod cohomology;
pub mod criterion;
pub mod diagonal;
pub mod error;
pub mod f8;
pub mod group;
pub mod lattice;
pub mod linalg;
pub mod resolution;
pub mod subgroup;

pub use error::{Error, Result};
pub use group::FiniteGroup;
pub use subgroup::{subgroup_classes, Subgroup};

//! Integral representation theory: G-lattices, exterior powers, coflasque
//! resolutions and the connecting map `α`.

pub mod alpha;
pub mod bar;
pub mod coflasque;
pub mod exterior;
pub mod glattice;
pub mod mnq;

pub use alpha::{alpha_image, phi, AlphaImage, PhiResult};
pub use coflasque::{coflasque_resolution, coflasque_resolution_with, CoflasqueResolution, Strategy};
pub use exterior::{exterior_sequence, lambda2, lambda2_regular_decomposition, ExteriorSequence, Lambda2Decomposition};
pub use glattice::{h1_integral, GLattice, LatticeSES};
pub use mnq::{build_mnq, build_q, rho_summary, MNQData, RhoSummary};

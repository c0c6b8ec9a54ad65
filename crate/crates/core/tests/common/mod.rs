//! Oracles shared by the integration and acceptance tests.

pub mod bar;
pub mod presentation;

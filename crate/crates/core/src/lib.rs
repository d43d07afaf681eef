//! Exact computation of vector invariants of finite classical groups.

pub mod classical;
pub mod gf;
pub mod groups;
pub mod invariants;
pub mod mpoly;
pub mod ratexpr;
pub mod report;
pub mod rng;
pub mod suite;
pub mod verify;

//! t-motives and dual t-motives given by a matrix Φ, with their δ-maps.

pub mod linalg;
mod ops;
mod spec;

pub use ops::{DeltaM1z, Peeling};
pub use spec::{tpoly_from_json, tpoly_to_json, MotiveSpec, PolyVec};

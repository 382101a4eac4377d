//! Exact lattice-polytope and toric-fan toolkit.

pub mod enumeration;
pub mod error;
pub mod fan;
pub mod formats;
pub mod linalg;
pub mod linear_systems;
pub mod mirrors;
pub mod par;
pub mod polytope;
pub mod reid;
pub mod vector;

pub use error::{Error, Result};
pub use vector::IntVector;

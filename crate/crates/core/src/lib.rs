//! Exact intersection homology, orbit spaces of finite simplicial actions,
//! equivariant signatures and transfers on finite simplicial complexes.

pub mod action;
pub mod catalog;
pub mod complex;
pub mod error;
pub mod exec;
pub mod filtered;
pub mod linalg;
pub mod signature;
pub mod transfer;
pub mod witt;

pub use complex::{Orientation, Simplex, SimplicialComplex, SimplicialMap};
pub use error::{Error, Result};

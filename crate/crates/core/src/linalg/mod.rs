//! Exact linear algebra: sparse integer elimination, Smith normal form,
//! subquotient bases and small dense rational matrices.

pub mod dense;
pub mod quotient;
pub mod snf;
pub mod sparse;

pub use dense::{fmt_q, parse_q, q, q_frac, QMatrix, Q};
pub use quotient::{NotInSubspace, QuotientBasis};
pub use sparse::{IntVec, QVec, SparseVec};

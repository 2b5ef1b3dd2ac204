//! Exact computations with generalized ADHM data on projective varieties that
//! contain the line `z0 = .. = zd = 0`: stability, monads, hypercohomology on
//! `P^n`, and the symmetry group action.

pub mod adhm;
pub mod cohomology;
pub mod config;
pub mod echelon;
pub mod error;
pub mod field;
pub mod graded;
pub mod matrix;
pub mod monad;
pub mod poly;
pub mod stability;
pub mod symmetry;
pub mod univariate;
pub mod variety;

pub use error::{Error, Result};
pub use field::{Field, FieldElement};
pub use matrix::DenseMatrix;
pub use poly::{HomogPoly, PolyMatrix};

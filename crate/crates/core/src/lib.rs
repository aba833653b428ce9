//! Birational maps on Schubert cells of GL(r).
//!
//! For a permutation matrix `w`, the free entries `n[a,b]` of `w·n` are sent
//! to coordinates `u[a,b]` by signed ratios of disjoint path sums. This crate
//! computes that map exactly, its inverse, Jacobian and UDL factorization,
//! checks the identities relating them, and evaluates the Jacquet integrals
//! whose continuation the change of variables enables.

pub mod biratmap;
pub mod error;
pub mod jacquet;
pub mod paths;
pub mod ratfunc;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use num_rational::BigRational;
pub use ratfunc::{Assignment, Monomial, Poly, RatFunc, RatMatrix, Var};
pub use weyl::{CellEntry, MatrixPattern, OrderKind, Permutation, VarIndex};

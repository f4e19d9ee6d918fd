//! Exact decision procedures and constructions for split quaternion
//! subalgebras of matrix algebras with involution.
//!
//! The library works over tiny exact coefficient fields (GF(p) for p <= 13,
//! GF(4), GF(8), GF(9), and the rationals) and decides, with explicit
//! certified witnesses, when a square-central element or an idempotent of
//! M_n(F) lies in a split quaternion subalgebra — optionally invariant under
//! a given involution. Every constructor re-verifies its defining relations
//! before returning, and theorem-backed negative answers are distinguished
//! from precondition failures.

pub mod error;
pub mod field;
pub mod harness;
pub mod idempotent;
pub mod involution;
pub mod json;
pub mod matrix;
pub mod quaternion;

pub use error::{Error, Result};
pub use field::{Field, Scalar};
pub use matrix::Matrix;

//! Exact computation of C- and G-patterns for rank-3 exchange matrices of
//! B-invariant type (the Markov quiver and its skew-symmetrizable relatives).
//!
//! Everything runs over exact arithmetic: arbitrary-precision integers for
//! coordinates in the modified basis, exact rationals for matrix states and
//! all fan geometry. There is no floating point anywhere on a correctness
//! path.
//!
//! The crate is organized around two independent computation routes:
//!
//! * a brute-force route ([`exchange`]) that mutates full 3x3 rational
//!   matrices and replays the raw c-/g-vector recursion, available for the
//!   two integer instances; and
//! * a matrix-free fast route ([`walk`], [`pattern`]) driven entirely by the
//!   K/S/T index combinatorics and the S/T-word recursion on modified
//!   vectors, valid for every B-invariant matrix.
//!
//! The remaining modules build on the fast route: [`fractal`] constructs the
//! linear isomorphisms between admissible subpatterns, [`cw`] parameterizes
//! all modified c- and g-vectors by coprime integer pairs, and [`gfan`]
//! assembles the G-fan on its planar section, checks the fan axioms, and
//! enumerates the connected components of the support complement.

pub mod cw;
pub mod error;
pub mod exchange;
pub mod fractal;
pub mod gfan;
pub mod linalg;
pub mod pattern;
pub mod report;
pub mod suites;
pub mod walk;

pub use error::Error;
pub use linalg::{Mat3, ModVec, Rat, Vec3};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

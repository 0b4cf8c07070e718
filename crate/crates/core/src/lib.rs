//! Exact character-sum computations over affine subspaces of affine space
//! over a finite field, with L-polynomial reconstruction from power sums.
//!
//! The crate is organized bottom-up:
//!
//! - [`field`]: table-based finite fields, extensions, norms;
//! - [`linalg`]: small dense matrices over a field;
//! - [`cyclotomic`]: exact arithmetic in Q(zeta_m);
//! - [`characters`]: multiplicative/additive characters, Gauss and Jacobi
//!   sums;
//! - [`subspace`]: affine subspaces, position classification, point
//!   enumeration;
//! - [`sums`]: character sums over subspaces and parametrized systems;
//! - [`lfunc`]: Newton's identities, L-polynomials, root weights, bounds;
//! - [`corpus`]: seeded instance generation for verification campaigns;
//! - [`verify`]: end-to-end verification pipelines;
//! - [`report`]: serializable result types.
//!
//! Everything upstream of floating point output is exact: field elements
//! are table indices, character sums are integer histograms, and sums and
//! polynomial coefficients live in cyclotomic fields over the rationals.

// Index-driven loops and explicit `% k == 0` tests read better in the
// table and polynomial arithmetic here than the iterator rewrites clippy
// suggests.
#![allow(clippy::needless_range_loop, clippy::manual_is_multiple_of)]

pub mod characters;
pub mod corpus;
pub mod cyclotomic;
pub mod error;
pub mod field;
pub mod lfunc;
pub mod linalg;
mod numutil;
pub mod report;
pub mod rng;
pub mod subspace;
pub mod sums;
pub mod verify;

pub use error::{Error, Result};
pub use numutil::binomial;

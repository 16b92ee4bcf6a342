//! Numerical core for fourth-order clamped boundary-value problems with the
//! strong sign-preserving property: operator factorization and composition,
//! finite-difference solvers on interval/ball/annulus grids with Green-matrix
//! positivity checks, principal eigenpairs, semilinear branch continuation
//! with pull-in bracketing, quasi-linear solves, and Moreau cone projection.

// `!(x > 0.0)` in validation guards also rejects NaN; `x <= 0.0` would let
// it through. Index loops mirror the stencil arithmetic they implement.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod assemble;
pub mod banded;
pub mod cone;
pub mod dense;
pub mod error;
pub mod exec;
pub mod grid;
pub mod operator;
pub mod semilinear;
pub mod sign;
pub mod spectral;
pub mod willmore;

#[cfg(test)]
pub(crate) mod test_oracles;

pub use error::{Error, Result};

//! Eigenvalue laboratory for the fundamental gap.
//!
//! Computes Dirichlet, Neumann and Bakry-Émery (drift) Laplacian eigenvalues on
//! intervals, polygons and thin graph domains with piecewise-linear finite
//! elements and finite differences, and uses them to check gap identities and
//! inequalities numerically.
//!
//! The crate is `no_std` and only needs `alloc`. Everything that touches files,
//! the command line or threads lives in the `gaplab` companion crate.
//!
//! Layout:
//!
//! * [`domain`] and [`mesh`]: geometry, moduli parametrization, meshing.
//! * [`sparse`] and [`assembly`]: P1 stiffness / mass / potential matrices.
//! * [`linalg`]: orderings, envelope LDLᵀ, dense and tridiagonal eigensolvers.
//! * [`eigen`]: shift-invert block Lanczos for symmetric pencils.
//! * [`oned`]: 1D Schrödinger and weighted (drift) solvers.
//! * [`lab`]: the experiments built on top of all of the above.

#![no_std]
// `!(x > 0.0)` is used on purpose: it rejects NaN along with the nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod assembly;
pub mod domain;
pub mod eigen;
mod error;
pub mod lab;
pub mod linalg;
pub mod mesh;
pub mod oned;
pub mod sparse;

pub use error::{Error, Result};

/// π² appears in every reference value; keep one spelling of it.
pub const PI2: f64 = core::f64::consts::PI * core::f64::consts::PI;

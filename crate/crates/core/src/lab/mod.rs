//! Experiments built on the solvers: the gap function, collapsing thin
//! domains, the ground-state transform identities, modulus certificates and
//! the triangle studies.

pub mod collapse;
pub mod gap;
pub mod modulus;
pub mod props;
pub mod suites;
pub mod triangles;

pub use gap::{fundamental_gap, rectangle_gap_exact, GapOptions, GapResult};
pub use modulus::ModulusReport;
pub use triangles::ScalingFit;

/// Scalar field on the plane (potentials, test functions).
pub type Field<'a> = &'a dyn Fn(crate::domain::Point) -> f64;

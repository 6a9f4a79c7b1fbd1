//! Linear algebra kernels: orderings, factorizations and small eigensolvers.

pub mod dense;
pub mod ldl;
pub mod ordering;
pub mod tridiag;

pub use ldl::EnvelopeLdl;

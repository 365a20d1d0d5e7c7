//! Eigenvectors of real symmetric tridiagonal matrices by inverse iteration.
//!
//! Clustered eigenvalues need their eigenvectors reorthogonalized. This crate
//! provides interchangeable backends for that step: modified Gram-Schmidt,
//! plain Householder reflectors, and the compact WY representation
//! `H_1 H_2 ... H_j = I - Y T Y^T` in an ordinary and a packed layout. Every
//! orthogonalization kernel counts its floating-point operations and the
//! number of global reductions it needs, so the cost model can be checked
//! against measurements.
//!
//! The crate is `no_std` with `alloc`. Parallelism is injected through the
//! [`exec::RowExecutor`] trait; [`exec::Serial`] runs everything inline.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod counters;
pub mod error;
pub mod exec;
pub mod invit;
pub mod matgen;
pub mod matrix;
pub mod ortho;
pub mod spectrum;
pub mod tridiag;
pub mod verify;

pub use counters::{Counts, OpCounter};
pub use error::Error;
pub use exec::{RowExecutor, Serial};
pub use invit::{Backend, EigenvectorResult, InverseIterationConfig};
pub use matgen::{Family, MatrixSpec};
pub use matrix::ColMatrix;
pub use ortho::{CwyVariant, ReflectorAccumulator, ReflectorParts};
pub use spectrum::EigenvalueEstimates;
pub use tridiag::{PivotedTriFactor, SymTridiagonal};

/// Machine epsilon for the `f64` scalars used throughout.
pub const EPS: f64 = f64::EPSILON;

pub type Result<T> = core::result::Result<T, Error>;

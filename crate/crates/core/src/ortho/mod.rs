//! Incremental orthogonalization backends.
//!
//! * [`mgs`]: modified Gram-Schmidt projection.
//! * [`householder`]: plain Householder reflectors, applied one at a time.
//! * [`accumulator`]: the compact WY form `I - Y T Y^T` of a reflector
//!   product, in the [`CwyVariant::Ordinary`] layout (explicit zeros, full
//!   length kernels) and the [`CwyVariant::Packed`] layout (leading zeros of
//!   `Y` skipped, `Y` and `T` sharing one buffer).
//!
//! The reflector-based backends share the [`ReflectorStore`] interface so the
//! inverse-iteration driver can swap them.

pub mod accumulator;
pub mod driver;
pub mod householder;
pub mod mgs;
pub mod reflector;

use alloc::vec::Vec;

use crate::{Counts, Result, RowExecutor};

pub use accumulator::{CwyVariant, ReflectorAccumulator};
pub use driver::{cwy_orthogonalize, mgs_orthogonalize, reflector_orthogonalize, Orthogonalized};
pub use householder::{householder_orthogonalize, HouseholderSequence};
pub use mgs::mgs_project;
pub use reflector::{make_reflector, ReflectorParts};

/// A growing product of Householder reflectors `H_1 H_2 ... H_k`.
///
/// Reflector `j` (1-based) is zero in rows `1..j-1`, so it is described by its
/// tail over rows `j..n`.
pub trait ReflectorStore {
    fn n(&self) -> usize;

    /// Number of reflectors currently held.
    fn count(&self) -> usize;

    fn capacity(&self) -> usize;

    /// Operation counts accumulated so far.
    fn counts(&self) -> Counts;

    /// Rows `count+1..n` of `(H_1 ... H_count)^T v`: the part of `v` the next
    /// reflector must annihilate.
    fn apply_transpose<E: RowExecutor>(&self, exec: &E, v: &[f64]) -> Result<Vec<f64>>;

    /// Builds reflector `count+1` from the tail returned by
    /// [`apply_transpose`](Self::apply_transpose).
    fn make_reflector<E: RowExecutor>(&self, exec: &E, tail: Vec<f64>) -> Result<ReflectorParts>;

    /// Appends reflector `count+1`.
    fn push<E: RowExecutor>(&mut self, exec: &E, parts: ReflectorParts) -> Result<()>;

    /// Drops the most recently appended reflector.
    fn pop(&mut self) -> Result<()>;

    /// The `j`-th orthonormal column (1-based) of the reflector product, up to
    /// a sign fixed by the implementation.
    fn column<E: RowExecutor>(&self, exec: &E, j: usize) -> Result<Vec<f64>>;
}

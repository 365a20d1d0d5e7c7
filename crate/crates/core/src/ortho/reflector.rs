use alloc::vec::Vec;

use crate::matrix::norm2;
use crate::{Error, Result};

/// One Householder reflector `H_j = I - t_j y_j y_j^T`.
///
/// `y_j` is zero above row `j`; `tail` holds rows `j..n`. The reflector maps
/// the input `u_j` to `w_j`, which keeps `u_j`'s first `j-1` rows, has `c_j`
/// in row `j` and zeros below.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectorParts {
    /// 1-based reflector index.
    pub j: usize,
    pub tail: Vec<f64>,
    pub t: f64,
    pub c: f64,
}

/// Builds the reflector for `u_tail` (rows `j..n` of `u_j`).
///
/// `c = -sgn(u_jj) ||u_tail||` with `sgn(0) = +1`, and `t` comes from the
/// reduced form `1 / (c^2 - u_jj c)`, which equals `2 / ||y||^2` without a
/// second pass over the vector.
pub fn make_reflector(u_tail: &[f64], j: usize) -> Result<ReflectorParts> {
    let norm = norm2(u_tail);
    reflector_from_norm(u_tail.to_vec(), j, norm)
}

pub(crate) fn reflector_from_norm(mut tail: Vec<f64>, j: usize, norm: f64) -> Result<ReflectorParts> {
    if tail.is_empty() || !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::DegenerateColumn { index: j });
    }
    let head = tail[0];
    let c = if head < 0.0 { norm } else { -norm };
    tail[0] = head - c;
    let t = 1.0 / (c * c - head * c);
    Ok(ReflectorParts { j, tail, t, c })
}

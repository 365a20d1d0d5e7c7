//! Test-matrix families: uniform random, all-ones, and glued Wilkinson.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result, SymTridiagonal};

/// Order of one Wilkinson block.
pub const WILKINSON_ORDER: usize = 21;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Diagonal and off-diagonal entries uniform on `[0, 1)`.
    Type1,
    /// Ones on all three diagonals.
    Type2,
    /// `W_21^+` blocks glued by `delta`.
    GluedWilkinson,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Type1 => "type1",
            Family::Type2 => "type2",
            Family::GluedWilkinson => "glued",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "type1" | "random" => Ok(Family::Type1),
            "type2" | "ones" => Ok(Family::Type2),
            "glued" | "glued_wilkinson" | "type3" => Ok(Family::GluedWilkinson),
            _ => Err(Error::InvalidArgument("unknown matrix family")),
        }
    }
}

/// Which matrix to build. `size` is the dimension for `Type1`/`Type2` and the
/// number of blocks for `GluedWilkinson`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixSpec {
    pub family: Family,
    pub size: usize,
    pub seed: u64,
    pub delta: f64,
}

impl MatrixSpec {
    pub fn type1(n: usize, seed: u64) -> Self {
        Self { family: Family::Type1, size: n, seed, delta: 1e-4 }
    }

    pub fn type2(n: usize) -> Self {
        Self { family: Family::Type2, size: n, seed: 0, delta: 1e-4 }
    }

    pub fn glued(num_blocks: usize, delta: f64) -> Self {
        Self { family: Family::GluedWilkinson, size: num_blocks, seed: 0, delta }
    }

    pub fn dimension(&self) -> usize {
        match self.family {
            Family::GluedWilkinson => WILKINSON_ORDER * self.size,
            _ => self.size,
        }
    }

    pub fn generate(&self) -> Result<SymTridiagonal> {
        match self.family {
            Family::Type1 => gen_type1(self.size, self.seed),
            Family::Type2 => gen_type2(self.size),
            Family::GluedWilkinson => gen_glued_wilkinson(self.size, self.delta),
        }
    }
}

/// Random matrix from one seeded stream: all diagonal entries first, then the
/// off-diagonal.
pub fn gen_type1(n: usize, seed: u64) -> Result<SymTridiagonal> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let diag: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    let offdiag: Vec<f64> = (0..n - 1).map(|_| rng.gen::<f64>()).collect();
    SymTridiagonal::new(diag, offdiag)
}

pub fn gen_type2(n: usize) -> Result<SymTridiagonal> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1"));
    }
    SymTridiagonal::new(vec![1.0; n], vec![1.0; n - 1])
}

/// Diagonal of `W_21^+`: `10, 9, ..., 1, 0, 1, ..., 10`.
pub fn wilkinson_diagonal() -> [f64; WILKINSON_ORDER] {
    let mut d = [0.0; WILKINSON_ORDER];
    for (i, x) in d.iter_mut().enumerate() {
        *x = (10 - i as i64).abs() as f64;
    }
    d
}

/// `num_blocks` copies of `W_21^+` on the diagonal, with `delta` on the
/// off-diagonal entries joining consecutive blocks.
pub fn gen_glued_wilkinson(num_blocks: usize, delta: f64) -> Result<SymTridiagonal> {
    if num_blocks == 0 {
        return Err(Error::InvalidArgument("need at least one block"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument("glue delta must lie in (0, 1)"));
    }
    let n = WILKINSON_ORDER * num_blocks;
    let block = wilkinson_diagonal();
    let diag: Vec<f64> = (0..n).map(|i| block[i % WILKINSON_ORDER]).collect();
    let mut offdiag = vec![1.0; n - 1];
    for b in 1..num_blocks {
        offdiag[WILKINSON_ORDER * b - 1] = delta;
    }
    SymTridiagonal::new(diag, offdiag)
}

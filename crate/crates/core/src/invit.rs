//! Inverse iteration drivers.
//!
//! Eigenvalues closer than `10^-3 ||T||` to their predecessor belong to the
//! same cluster, and each new eigenvector in a cluster is reorthogonalized
//! against the ones already accepted. The classical driver does this with
//! modified Gram-Schmidt; the reflector drivers keep a running product of
//! Householder reflectors per cluster (compact WY or plain), append one trial
//! reflector per iteration and read the new vector off as a column of the
//! product.

use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::{norm2, norm_inf};
use crate::ortho::{mgs_project, HouseholderSequence, ReflectorStore};
use crate::{
    ColMatrix, Counts, CwyVariant, EigenvalueEstimates, Error, OpCounter, PivotedTriFactor,
    ReflectorAccumulator, Result, RowExecutor, SymTridiagonal, EPS,
};

/// Relative gap below which consecutive eigenvalues share a cluster.
pub const CLUSTER_GAP: f64 = 1e-3;

/// Restarts with a fresh random vector before a column is given up on.
pub const MAX_RESTARTS: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Mgs,
    Householder,
    CwyOrdinary,
    CwyPacked,
}

impl Backend {
    pub const ALL: [Backend; 4] = [Backend::Mgs, Backend::Householder, Backend::CwyOrdinary, Backend::CwyPacked];

    pub fn name(self) -> &'static str {
        match self {
            Backend::Mgs => "mgs",
            Backend::Householder => "householder",
            Backend::CwyOrdinary => "cwy_ordinary",
            Backend::CwyPacked => "cwy_packed",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mgs" => Ok(Backend::Mgs),
            "householder" => Ok(Backend::Householder),
            "cwy_ordinary" | "cwy" => Ok(Backend::CwyOrdinary),
            "cwy_packed" | "cwy_new" => Ok(Backend::CwyPacked),
            _ => Err(Error::InvalidArgument("unknown backend")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseIterationConfig {
    /// Solves allowed per attempt, polishing steps included.
    pub max_iters: usize,
    /// Minimum `||x||_inf` of the (reorthogonalized) solve output for a unit
    /// right-hand side. `None` means `1 / (100 n eps ||T||)`.
    pub growth_threshold: Option<f64>,
    /// Extra iterations after the growth test first passes.
    pub extra_iters: usize,
    pub rng_seed: u64,
    pub backend: Backend,
    /// Scales the minimum separation `n eps ||T||` between shifts.
    pub perturb_factor: f64,
}

impl Default for InverseIterationConfig {
    fn default() -> Self {
        Self {
            max_iters: 5,
            growth_threshold: None,
            extra_iters: 1,
            rng_seed: 1,
            backend: Backend::CwyPacked,
            perturb_factor: 1.0,
        }
    }
}

impl InverseIterationConfig {
    pub fn with_backend(backend: Backend) -> Self {
        Self { backend, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidArgument("max_iters must be at least 1"));
        }
        if let Some(g) = self.growth_threshold {
            if !(g > 0.0) {
                return Err(Error::InvalidArgument("growth threshold must be positive"));
            }
        }
        if !(self.perturb_factor >= 0.0) {
            return Err(Error::InvalidArgument("perturb factor must be non-negative"));
        }
        Ok(())
    }

    /// The growth a solve must reach for dimension `n` and norm `tnorm`.
    pub fn effective_growth_threshold(&self, n: usize, tnorm: f64) -> f64 {
        self.growth_threshold.unwrap_or_else(|| {
            let scale = if tnorm > 0.0 { tnorm } else { 1.0 };
            1.0 / (100.0 * n as f64 * EPS * scale)
        })
    }
}

/// Whether `lam_j` joins the cluster of `lam_prev`.
pub fn detect_cluster(lam_j: f64, lam_prev: f64, tnorm: f64) -> bool {
    (lam_j - lam_prev).abs() <= CLUSTER_GAP * tnorm
}

/// Cluster bookkeeping while sweeping eigenvalues in ascending order: `j1`
/// is the first index of the current cluster and `jc = j - j1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterTracker {
    pub j1: usize,
    pub jc: usize,
    pub threshold: f64,
    prev: Option<f64>,
}

impl ClusterTracker {
    pub fn new(tnorm: f64) -> Self {
        Self { j1: 0, jc: 0, threshold: CLUSTER_GAP * tnorm, prev: None }
    }

    /// Moves to eigenvalue `j` and returns `true` if it continues the current
    /// cluster.
    pub fn advance(&mut self, j: usize, lam: f64) -> bool {
        let joined = matches!(self.prev, Some(p) if (lam - p).abs() <= self.threshold);
        if !joined {
            self.j1 = j;
        }
        self.jc = j - self.j1;
        self.prev = Some(lam);
        joined
    }
}

/// Index ranges of the clusters of an ascending eigenvalue list.
pub fn cluster_ranges(lams: &[f64], tnorm: f64) -> Vec<Range<usize>> {
    let mut tracker = ClusterTracker::new(tnorm);
    let mut out: Vec<Range<usize>> = Vec::new();
    for (j, &lam) in lams.iter().enumerate() {
        if tracker.advance(j, lam) {
            if let Some(last) = out.last_mut() {
                last.end = j + 1;
            }
        } else {
            out.push(j..j + 1);
        }
    }
    out
}

/// Pushes apart shifts closer than `sep = factor * n * eps * tnorm` so that
/// the output is strictly increasing.
pub fn perturb_degenerate(lams: &[f64], n: usize, tnorm: f64, factor: f64) -> Vec<f64> {
    let mut sep = factor * n as f64 * EPS * tnorm;
    if !(sep > 0.0) {
        sep = f64::MIN_POSITIVE;
    }
    let mut out = lams.to_vec();
    for j in 1..out.len() {
        if out[j] - out[j - 1] < sep {
            let bumped = out[j - 1] + sep;
            // keep strict increase even where `sep` is below one ulp
            out[j] = if bumped > out[j - 1] { bumped } else { libm::nextafter(out[j - 1], f64::INFINITY) };
        }
    }
    out
}

/// Growth test on an unnormalized solve output `x` for a unit right-hand side.
pub fn accept_test(x: &[f64], n: usize, tnorm: f64, cfg: &InverseIterationConfig) -> bool {
    norm_inf(x) >= cfg.effective_growth_threshold(n, tnorm)
}

/// Starting vector for eigenvalue `j`: entries uniform on `[-1, 1)` from a
/// ChaCha stream selected by `(seed, j, attempt)`.
pub fn start_vector(seed: u64, j: usize, attempt: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((j as u64) << 2) | (attempt & 3));
    (0..n).map(|_| 2.0 * rng.gen::<f64>() - 1.0).collect()
}

#[derive(Debug, Clone)]
pub struct EigenvectorResult {
    /// Unit eigenvectors, one column per eigenvalue.
    pub q: ColMatrix,
    /// Shifts actually used (eigenvalue estimates after separation).
    pub shifts: Vec<f64>,
    /// Solves performed per column, restarts included.
    pub iters: Vec<usize>,
    /// `||T q_j - shift_j q_j||_inf`.
    pub residuals: Vec<f64>,
    pub converged: Vec<bool>,
    pub cluster_sizes: Vec<usize>,
    /// Reorthogonalization cost.
    pub counts: Counts,
}

impl EigenvectorResult {
    pub fn nonconverged(&self) -> usize {
        self.converged.iter().filter(|c| !**c).count()
    }
}

/// Reorthogonalization strategy for the columns after the first of a cluster.
trait ClusterOrtho {
    /// Orthogonalizes the solve output `x` against the accepted vectors and
    /// returns the next unit right-hand side with the growth of its
    /// orthogonalized component. `fresh` is set on the first iteration of an
    /// attempt.
    fn orthogonalize<E: RowExecutor>(
        &mut self,
        exec: &E,
        x: Vec<f64>,
        accepted: &[Vec<f64>],
        fresh: bool,
    ) -> Result<(Vec<f64>, f64)>;

    fn counts(&self) -> Counts;
}

struct MgsOrtho {
    counter: OpCounter,
}

impl ClusterOrtho for MgsOrtho {
    fn orthogonalize<E: RowExecutor>(
        &mut self,
        exec: &E,
        mut x: Vec<f64>,
        accepted: &[Vec<f64>],
        _fresh: bool,
    ) -> Result<(Vec<f64>, f64)> {
        let n = x.len();
        let before = norm2(&x);
        let basis: Vec<&[f64]> = accepted.iter().map(|v| v.as_slice()).collect();
        mgs_project(exec, &mut x, &basis, &self.counter)?;
        let norm = norm2(&x);
        if !(norm > 0.0) || norm < n as f64 * EPS * before {
            return Err(Error::DegenerateColumn { index: accepted.len() + 1 });
        }
        let growth = norm_inf(&x);
        x.iter_mut().for_each(|v| *v /= norm);
        Ok((x, growth))
    }

    fn counts(&self) -> Counts {
        self.counter.snapshot()
    }
}

struct ReflectorOrtho<S> {
    store: S,
}

impl<S: ReflectorStore> ClusterOrtho for ReflectorOrtho<S> {
    fn orthogonalize<E: RowExecutor>(
        &mut self,
        exec: &E,
        x: Vec<f64>,
        accepted: &[Vec<f64>],
        fresh: bool,
    ) -> Result<(Vec<f64>, f64)> {
        let n = x.len();
        let jc = accepted.len();
        if self.store.count() == 0 {
            // Y_1, T_1 from the cluster's first vector; its column of the
            // product is that vector up to sign, so it is not recomputed.
            let parts = self.store.make_reflector(exec, accepted[0].clone())?;
            self.store.push(exec, parts)?;
        } else if !fresh {
            // roll back the previous iteration's trial reflector
            self.store.pop()?;
        }
        debug_assert_eq!(self.store.count(), jc);
        let before = norm2(&x);
        let tail = self.store.apply_transpose(exec, &x)?;
        let parts = self.store.make_reflector(exec, tail)?;
        let c = parts.c.abs();
        if c < n as f64 * EPS * before {
            return Err(Error::DegenerateColumn { index: jc + 1 });
        }
        self.store.push(exec, parts)?;
        let q = self.store.column(exec, jc + 1)?;
        let growth = c * norm_inf(&q);
        Ok((q, growth))
    }

    fn counts(&self) -> Counts {
        self.store.counts()
    }
}

struct ColumnOutcome {
    vector: Vec<f64>,
    iters: usize,
    converged: bool,
}

struct ClusterOutput {
    columns: Vec<ColumnOutcome>,
    counts: Counts,
}

struct Problem<'a> {
    t: &'a SymTridiagonal,
    shifts: &'a [f64],
    threshold: f64,
    cfg: &'a InverseIterationConfig,
}

fn normalize(mut v: Vec<f64>) -> Vec<f64> {
    let nrm = norm2(&v);
    if nrm > 0.0 {
        v.iter_mut().for_each(|x| *x /= nrm);
    }
    v
}

/// One attempt at column `j` (position `jc` in its cluster) from start vector
/// `v`.
fn iterate_column<E: RowExecutor, O: ClusterOrtho>(
    exec: &E,
    p: &Problem<'_>,
    factor: &PivotedTriFactor,
    ortho: &mut O,
    accepted: &[Vec<f64>],
    mut v: Vec<f64>,
    iters: &mut usize,
) -> Result<(Vec<f64>, bool)> {
    let mut accepted_growth = false;
    let mut polish = 0;
    for k in 1..=p.cfg.max_iters {
        *iters += 1;
        let x = factor.solve(&v)?;
        let growth;
        if accepted.is_empty() {
            growth = norm_inf(&x);
            v = normalize(x);
        } else {
            let (next, g) = ortho.orthogonalize(exec, x, accepted, k == 1)?;
            v = next;
            growth = g;
        }
        if accepted_growth {
            polish += 1;
            if polish >= p.cfg.extra_iters {
                break;
            }
        } else if growth >= p.threshold {
            accepted_growth = true;
            if p.cfg.extra_iters == 0 {
                break;
            }
        }
    }
    Ok((v, accepted_growth))
}

fn run_cluster<E: RowExecutor, O: ClusterOrtho>(
    exec: &E,
    p: &Problem<'_>,
    range: Range<usize>,
    mut ortho: O,
) -> Result<ClusterOutput> {
    let n = p.t.n();
    let mut accepted: Vec<Vec<f64>> = Vec::with_capacity(range.len());
    let mut columns = Vec::with_capacity(range.len());
    for j in range {
        let factor = p.t.factor_shifted(p.shifts[j]);
        let mut iters = 0;
        let mut attempt = 0;
        let (vector, converged) = loop {
            let v = normalize(start_vector(p.cfg.rng_seed, j, attempt, n));
            match iterate_column(exec, p, &factor, &mut ortho, &accepted, v, &mut iters) {
                Ok(out) => break out,
                Err(Error::DegenerateColumn { .. }) if attempt < MAX_RESTARTS => attempt += 1,
                Err(Error::DegenerateColumn { .. }) => {
                    // give up on this eigenvector but keep the basis orthonormal
                    let z = start_vector(p.cfg.rng_seed, j, MAX_RESTARTS + 1, n);
                    let (vector, _) = ortho.orthogonalize(exec, z, &accepted, true)?;
                    break (vector, false);
                }
                Err(e) => return Err(e),
            }
        };
        let vector = normalize(vector);
        accepted.push(vector.clone());
        columns.push(ColumnOutcome { vector, iters, converged });
    }
    Ok(ClusterOutput { columns, counts: ortho.counts() })
}

fn drive<E: RowExecutor>(
    exec: &E,
    t: &SymTridiagonal,
    lams: &EigenvalueEstimates,
    cfg: &InverseIterationConfig,
) -> Result<EigenvectorResult> {
    cfg.validate()?;
    let n = t.n();
    if lams.n != n {
        return Err(Error::DimensionMismatch { expected: n, found: lams.n });
    }
    let m = lams.m();
    if m == 0 {
        return Err(Error::InvalidArgument("no eigenvalues given"));
    }
    let tnorm = t.norm_estimate();
    let shifts = perturb_degenerate(&lams.values, n, tnorm, cfg.perturb_factor);
    let ranges = cluster_ranges(&shifts, tnorm);
    let problem = Problem { t, shifts: &shifts, threshold: cfg.effective_growth_threshold(n, tnorm), cfg };

    let outputs = exec.map_tasks(ranges.len(), |ci| {
        let range = ranges[ci].clone();
        let size = range.len();
        match cfg.backend {
            Backend::Mgs => run_cluster(exec, &problem, range, MgsOrtho { counter: OpCounter::new() }),
            Backend::Householder => {
                let store = HouseholderSequence::new(n, size)?;
                run_cluster(exec, &problem, range, ReflectorOrtho { store })
            }
            Backend::CwyOrdinary | Backend::CwyPacked => {
                let variant =
                    if cfg.backend == Backend::CwyOrdinary { CwyVariant::Ordinary } else { CwyVariant::Packed };
                let store = ReflectorAccumulator::new(n, size, variant)?;
                run_cluster(exec, &problem, range, ReflectorOrtho { store })
            }
        }
    });

    let mut q = ColMatrix::zeros(n, m);
    let mut iters = Vec::with_capacity(m);
    let mut converged = Vec::with_capacity(m);
    let mut counts = Counts::default();
    let mut j = 0;
    for out in outputs {
        let out = out?;
        counts += out.counts;
        for col in out.columns {
            q.col_mut(j).copy_from_slice(&col.vector);
            iters.push(col.iters);
            converged.push(col.converged);
            j += 1;
        }
    }
    let residuals = (0..m)
        .map(|j| {
            let tq = t.matvec(q.col(j)).expect("column length matches");
            tq.iter().zip(q.col(j)).map(|(a, b)| (a - problem.shifts[j] * b).abs()).fold(0.0, f64::max)
        })
        .collect();
    Ok(EigenvectorResult {
        q,
        shifts,
        iters,
        residuals,
        converged,
        cluster_sizes: ranges.iter().map(|r| r.len()).collect(),
        counts,
    })
}

/// Inverse iteration with modified Gram-Schmidt reorthogonalization.
pub fn classical_inverse_iteration<E: RowExecutor>(
    exec: &E,
    t: &SymTridiagonal,
    lams: &EigenvalueEstimates,
    cfg: &InverseIterationConfig,
) -> Result<EigenvectorResult> {
    if cfg.backend != Backend::Mgs {
        return Err(Error::WrongBackend(cfg.backend.name()));
    }
    drive(exec, t, lams, cfg)
}

/// Inverse iteration with compact WY reorthogonalization, one accumulator
/// per cluster.
pub fn cwy_inverse_iteration<E: RowExecutor>(
    exec: &E,
    t: &SymTridiagonal,
    lams: &EigenvalueEstimates,
    cfg: &InverseIterationConfig,
) -> Result<EigenvectorResult> {
    if !matches!(cfg.backend, Backend::CwyOrdinary | Backend::CwyPacked) {
        return Err(Error::WrongBackend(cfg.backend.name()));
    }
    drive(exec, t, lams, cfg)
}

/// Inverse iteration with plain Householder reflectors applied one by one.
pub fn householder_inverse_iteration<E: RowExecutor>(
    exec: &E,
    t: &SymTridiagonal,
    lams: &EigenvalueEstimates,
    cfg: &InverseIterationConfig,
) -> Result<EigenvectorResult> {
    if cfg.backend != Backend::Householder {
        return Err(Error::WrongBackend(cfg.backend.name()));
    }
    drive(exec, t, lams, cfg)
}

/// Runs whichever driver `cfg.backend` selects.
pub fn inverse_iteration<E: RowExecutor>(
    exec: &E,
    t: &SymTridiagonal,
    lams: &EigenvalueEstimates,
    cfg: &InverseIterationConfig,
) -> Result<EigenvectorResult> {
    drive(exec, t, lams, cfg)
}

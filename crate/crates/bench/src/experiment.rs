//! The bisection, inverse iteration and verification pipeline.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::OpenOptions;
use std::path::Path;
use std::time::{Duration, Instant};

use cwyinvit::invit::{cluster_ranges, inverse_iteration};
use cwyinvit::spectrum::{bisect_eigenvalues, default_tolerance};
use cwyinvit::verify::{orthogonality_deviation, verify_result};
use cwyinvit::{Backend, EigenvalueEstimates, EigenvectorResult, InverseIterationConfig, SymTridiagonal, EPS};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{BenchError, Result};
use crate::pool::Executor;

#[derive(Debug, Clone, PartialEq)]
pub struct RunMetrics {
    /// Inverse iteration only.
    pub wall_time: Duration,
    pub flops: u64,
    pub sync_events: u64,
    /// `max |Q^T Q - I|`, computed when verifying.
    pub max_orth_dev: Option<f64>,
    /// Largest `||T q - lambda q||_inf / ||T||`.
    pub max_residual: f64,
    pub nonconverged: usize,
    /// Iteration count to number of columns.
    pub iters_histogram: BTreeMap<usize, usize>,
    pub cluster_sizes: Vec<usize>,
}

impl RunMetrics {
    pub fn max_cluster(&self) -> usize {
        self.cluster_sizes.iter().copied().max().unwrap_or(0)
    }
}

/// Limits a verified run must meet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub orthogonality: f64,
    pub residual: f64,
}

impl Thresholds {
    /// `100 n eps` orthogonality for the reflector backends and `1e-8` for
    /// Gram-Schmidt; scaled residual `1000 n eps` for all.
    pub fn for_run(n: usize, backend: Backend) -> Self {
        let nf = n as f64;
        let orthogonality = if backend == Backend::Mgs { 1e-8 } else { 100.0 * nf * EPS };
        Self { orthogonality, residual: 1e3 * nf * EPS }
    }

    pub fn check(&self, m: &RunMetrics) -> Vec<String> {
        let mut failures = Vec::new();
        if let Some(d) = m.max_orth_dev {
            if d > self.orthogonality {
                failures.push(format!("orthogonality {d:.3e} exceeds {:.3e}", self.orthogonality));
            }
        }
        if m.max_residual > self.residual {
            failures.push(format!("scaled residual {:.3e} exceeds {:.3e}", m.max_residual, self.residual));
        }
        if m.nonconverged > 0 {
            failures.push(format!("{} columns did not converge", m.nonconverged));
        }
        failures
    }
}

/// A matrix with its eigenvalues, shared by runs that compare backends.
pub struct Prepared {
    pub t: SymTridiagonal,
    pub lams: EigenvalueEstimates,
}

impl Prepared {
    pub fn new(cfg: &RunConfig) -> Result<Self> {
        let t = cfg.matrix.generate()?;
        let tol = cfg.tol.unwrap_or_else(|| default_tolerance(&t));
        let lams = bisect_eigenvalues(&t, t.n(), tol)?;
        Ok(Self { t, lams })
    }

    pub fn tnorm(&self) -> f64 {
        let t = self.t.norm_estimate();
        if t > 0.0 {
            t
        } else {
            1.0
        }
    }
}

/// Runs inverse iteration on a prepared matrix and measures it.
pub fn run_prepared(prep: &Prepared, cfg: &RunConfig) -> Result<(EigenvectorResult, RunMetrics)> {
    cfg.validate()?;
    let exec = Executor::new(cfg.threads)?;
    let icfg = InverseIterationConfig { rng_seed: cfg.seed, ..InverseIterationConfig::with_backend(cfg.backend) };
    let start = Instant::now();
    let res = inverse_iteration(&exec, &prep.t, &prep.lams, &icfg)?;
    let wall_time = start.elapsed();

    let mut iters_histogram = BTreeMap::new();
    for &k in &res.iters {
        *iters_histogram.entry(k).or_insert(0) += 1;
    }
    let max_residual = res.residuals.iter().fold(0.0f64, |a, r| a.max(*r)) / prep.tnorm();
    let metrics = RunMetrics {
        wall_time,
        flops: res.counts.flops,
        sync_events: res.counts.sync_events,
        max_orth_dev: cfg.verify.then(|| orthogonality_deviation(&res.q)),
        max_residual,
        nonconverged: res.nonconverged(),
        iters_histogram,
        cluster_sizes: res.cluster_sizes.clone(),
    };
    Ok((res, metrics))
}

/// Generates the matrix, computes all eigenvalues, runs the configured
/// backend and appends a CSV row when an output path is set.
pub fn run_experiment(cfg: &RunConfig) -> Result<RunMetrics> {
    cfg.validate()?;
    let prep = Prepared::new(cfg)?;
    let (_, metrics) = run_prepared(&prep, cfg)?;
    if let Some(path) = &cfg.output_path {
        append_csv(path, &[csv_row(cfg, &metrics)])?;
    }
    Ok(metrics)
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CsvRow {
    pub family: String,
    pub n: usize,
    pub backend: String,
    pub threads: usize,
    pub seed: u64,
    pub wall_s: f64,
    pub flops: u64,
    pub sync_events: u64,
    pub max_orth_dev: Option<f64>,
    pub max_residual: f64,
    pub nonconverged: usize,
    pub max_cluster: usize,
}

pub const CSV_HEADER: &str =
    "family,n,backend,threads,seed,wall_s,flops,sync_events,max_orth_dev,max_residual,nonconverged,max_cluster";

pub fn csv_row(cfg: &RunConfig, m: &RunMetrics) -> CsvRow {
    CsvRow {
        family: cfg.matrix.family.name().to_string(),
        n: cfg.matrix.dimension(),
        backend: cfg.backend.name().to_string(),
        threads: cfg.threads,
        seed: cfg.seed,
        wall_s: m.wall_time.as_secs_f64(),
        flops: m.flops,
        sync_events: m.sync_events,
        max_orth_dev: m.max_orth_dev,
        max_residual: m.max_residual,
        nonconverged: m.nonconverged,
        max_cluster: m.max_cluster(),
    }
}

/// Appends rows, writing the header first if the file is new or empty.
pub fn append_csv(path: &Path, rows: &[CsvRow]) -> Result<()> {
    let io_err = |source| BenchError::Io { path: path.to_path_buf(), source };
    let file = OpenOptions::new().create(true).append(true).open(path).map_err(io_err)?;
    let fresh = file.metadata().map_err(io_err)?.len() == 0;
    let mut w = csv::WriterBuilder::new().has_headers(fresh).from_writer(file);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(io_err)?;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct BackendRun {
    pub backend: Backend,
    pub metrics: RunMetrics,
    /// Worst per-cluster subspace sine against the first backend, when
    /// verifying.
    pub subspace_vs_first: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub family: String,
    pub n: usize,
    pub threads: usize,
    pub runs: Vec<BackendRun>,
}

impl Comparison {
    /// `t_first / t_b`, the speedup of each backend over the first.
    pub fn speedups(&self) -> Vec<f64> {
        let base = self.runs[0].metrics.wall_time.as_secs_f64();
        self.runs.iter().map(|r| base / r.metrics.wall_time.as_secs_f64().max(1e-12)).collect()
    }

    /// Flops of each backend divided by the first backend's.
    pub fn flop_ratios(&self) -> Vec<f64> {
        let base = self.runs[0].metrics.flops.max(1) as f64;
        self.runs.iter().map(|r| r.metrics.flops as f64 / base).collect()
    }

    /// First backend's sync events divided by each backend's.
    pub fn sync_ratios(&self) -> Vec<f64> {
        let base = self.runs[0].metrics.sync_events as f64;
        self.runs.iter().map(|r| base / r.metrics.sync_events.max(1) as f64).collect()
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} n={} threads={}", self.family, self.n, self.threads)?;
        writeln!(
            f,
            "{:<13} {:>10} {:>14} {:>11} {:>11} {:>11} {:>8} {:>8} {:>8}",
            "backend", "wall_s", "flops", "syncs", "orth_dev", "residual", "speedup", "flops/x", "syncs/x"
        )?;
        let (s, fl, sy) = (self.speedups(), self.flop_ratios(), self.sync_ratios());
        for (i, r) in self.runs.iter().enumerate() {
            let m = &r.metrics;
            let orth = m.max_orth_dev.map_or_else(|| "-".to_string(), |d| format!("{d:.2e}"));
            writeln!(
                f,
                "{:<13} {:>10.4} {:>14} {:>11} {:>11} {:>11.2e} {:>8.2} {:>8.2} {:>8.2}",
                r.backend.name(),
                m.wall_time.as_secs_f64(),
                m.flops,
                m.sync_events,
                orth,
                m.max_residual,
                s[i],
                fl[i],
                sy[i]
            )?;
        }
        Ok(())
    }
}

/// Runs every backend on the same matrix, eigenvalues and seed.
pub fn compare_backends(base: &RunConfig, backends: &[Backend]) -> Result<Comparison> {
    if backends.len() < 2 {
        return Err(BenchError::Config("compare needs at least two backends".into()));
    }
    base.validate()?;
    let prep = Prepared::new(base)?;
    let ranges = cluster_ranges(&prep.lams.values, prep.t.norm_estimate());
    let mut runs = Vec::with_capacity(backends.len());
    let mut rows = Vec::with_capacity(backends.len());
    let mut first_q = None;
    for &backend in backends {
        let cfg = RunConfig { backend, ..base.clone() };
        let (res, metrics) = run_prepared(&prep, &cfg)?;
        let subspace_vs_first = match (&first_q, base.verify) {
            (Some(q0), true) => verify_result(&prep.t, &res.q, &res.shifts, Some((q0, &ranges)))?.subspace,
            _ => None,
        };
        if first_q.is_none() {
            first_q = Some(res.q);
        }
        rows.push(csv_row(&cfg, &metrics));
        runs.push(BackendRun { backend, metrics, subspace_vs_first });
    }
    if let Some(path) = &base.output_path {
        append_csv(path, &rows)?;
    }
    Ok(Comparison {
        family: base.matrix.family.name().to_string(),
        n: base.matrix.dimension(),
        threads: base.threads,
        runs,
    })
}

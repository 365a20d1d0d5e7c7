use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cwyinvit::{Backend, Family};
use cwyinvit_bench::config::{parse_backends, THREADS_ENV};
use cwyinvit_bench::experiment::{compare_backends, run_experiment, Thresholds};
use cwyinvit_bench::{BenchError, RunMetrics, Settings};

/// Eigenvectors of symmetric tridiagonal matrices by inverse iteration.
#[derive(Parser)]
#[command(name = "cwyinvit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one backend on one matrix.
    Run(Common),
    /// Run several backends (comma separated) on the same matrix.
    Compare(Common),
}

#[derive(Args)]
struct Common {
    /// type1, type2 or glued.
    #[arg(long)]
    family: Option<Family>,
    /// Dimension for type1 and type2.
    #[arg(long)]
    n: Option<usize>,
    /// Number of 21x21 blocks for glued.
    #[arg(long)]
    blocks: Option<usize>,
    /// Glue value for glued.
    #[arg(long)]
    delta: Option<f64>,
    /// mgs, householder, cwy_ordinary or cwy_packed; a list for compare.
    #[arg(long)]
    backend: Option<String>,
    /// Worker threads; defaults to $CWYINVIT_THREADS, then 1.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Bisection half-width.
    #[arg(long)]
    tol: Option<f64>,
    /// Append CSV rows to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Check orthogonality, residuals and convergence; exit 1 on failure.
    #[arg(long)]
    verify: bool,
    /// key = value file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Common {
    fn settings(&self) -> Result<Settings, BenchError> {
        let mut base = Settings::default();
        if let Ok(v) = std::env::var(THREADS_ENV) {
            let threads = v.trim().parse().map_err(|_| BenchError::Config(format!("{THREADS_ENV}={v:?}")))?;
            base.threads = Some(threads);
        }
        if let Some(path) = &self.config {
            base = base.overridden_by(Settings::from_file(path)?);
        }
        let flags = Settings {
            family: self.family,
            n: self.n,
            blocks: self.blocks,
            delta: self.delta,
            backends: self.backend.as_deref().map(parse_backends).transpose()?,
            threads: self.threads,
            seed: self.seed,
            tol: self.tol,
            out: self.out.clone(),
            verify: self.verify.then_some(true),
        };
        Ok(base.overridden_by(flags))
    }
}

fn print_metrics(m: &RunMetrics) {
    println!("wall time      {:.6} s", m.wall_time.as_secs_f64());
    println!("flops          {}", m.flops);
    println!("sync events    {}", m.sync_events);
    if let Some(d) = m.max_orth_dev {
        println!("max |QtQ - I|  {d:.3e}");
    }
    println!("max residual   {:.3e} (scaled by ||T||)", m.max_residual);
    println!("nonconverged   {}", m.nonconverged);
    println!("clusters       {} (largest {})", m.cluster_sizes.len(), m.max_cluster());
    let hist: Vec<String> = m.iters_histogram.iter().map(|(k, c)| format!("{k}:{c}")).collect();
    println!("iterations     {}", hist.join(" "));
}

fn report(label: &str, n: usize, backend: Backend, m: &RunMetrics) -> bool {
    let failures = Thresholds::for_run(n, backend).check(m);
    for f in &failures {
        eprintln!("verify failed ({label}): {f}");
    }
    failures.is_empty()
}

fn execute(cli: Cli) -> Result<bool, BenchError> {
    match cli.command {
        Command::Run(args) => {
            let s = args.settings()?;
            let backends = s.backends_or_default();
            if backends.len() != 1 {
                return Err(BenchError::Config("run takes a single backend; use compare".into()));
            }
            let cfg = s.to_run_config(backends[0])?;
            let m = run_experiment(&cfg)?;
            println!("{} n={} backend={} threads={}", cfg.matrix.family, cfg.matrix.dimension(), cfg.backend, cfg.threads);
            print_metrics(&m);
            Ok(!cfg.verify || report(cfg.backend.name(), cfg.matrix.dimension(), cfg.backend, &m))
        }
        Command::Compare(args) => {
            let mut s = args.settings()?;
            if s.backends.is_none() {
                s.backends = Some(vec![Backend::Mgs, Backend::CwyPacked]);
            }
            let backends = s.backends_or_default();
            let cfg = s.to_run_config(backends[0])?;
            let cmp = compare_backends(&cfg, &backends)?;
            print!("{cmp}");
            let mut ok = true;
            for r in &cmp.runs {
                if let Some(sine) = r.subspace_vs_first {
                    println!("{:<13} cluster subspace sine vs {}: {sine:.2e}", r.backend.name(), backends[0]);
                }
                if cfg.verify {
                    ok &= report(r.backend.name(), cmp.n, r.backend, &r.metrics);
                }
            }
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}

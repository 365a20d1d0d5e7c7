//! Run configuration from flags and `key=value` files.

use std::path::{Path, PathBuf};

use cwyinvit::{Backend, Family, MatrixSpec};

use crate::error::{BenchError, Result};

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "CWYINVIT_THREADS";

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub matrix: MatrixSpec,
    pub backend: Backend,
    pub threads: usize,
    /// Seeds the Type-1 generator and the start vectors.
    pub seed: u64,
    /// Bisection half-width; `None` uses the library default.
    pub tol: Option<f64>,
    pub output_path: Option<PathBuf>,
    pub verify: bool,
}

impl RunConfig {
    pub fn new(matrix: MatrixSpec, backend: Backend) -> Self {
        Self { matrix, backend, threads: 1, seed: matrix.seed, tol: None, output_path: None, verify: false }
    }

    pub fn validate(&self) -> Result<()> {
        if self.threads == 0 {
            return Err(BenchError::Config("threads must be at least 1".into()));
        }
        if self.matrix.size == 0 {
            return Err(BenchError::Config("matrix size must be at least 1".into()));
        }
        if let Some(tol) = self.tol {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(BenchError::Config("tol must be positive".into()));
            }
        }
        Ok(())
    }
}

/// Partially specified settings; later sources override earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub family: Option<Family>,
    pub n: Option<usize>,
    pub blocks: Option<usize>,
    pub delta: Option<f64>,
    pub backends: Option<Vec<Backend>>,
    pub threads: Option<usize>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub verify: Option<bool>,
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| BenchError::Config(format!("bad value for {key}: {value:?}")))
}

pub fn parse_backends(value: &str) -> Result<Vec<Backend>> {
    value.split(',').map(|b| parse::<Backend>("backend", b.trim())).collect()
}

impl Settings {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse_str(text: &str) -> Result<Self> {
        let mut s = Settings::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| BenchError::Config(format!("line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "family" => s.family = Some(parse(key, value)?),
                "n" => s.n = Some(parse(key, value)?),
                "blocks" => s.blocks = Some(parse(key, value)?),
                "delta" => s.delta = Some(parse(key, value)?),
                "backend" | "backends" => s.backends = Some(parse_backends(value)?),
                "threads" => s.threads = Some(parse(key, value)?),
                "seed" => s.seed = Some(parse(key, value)?),
                "tol" => s.tol = Some(parse(key, value)?),
                "out" => s.out = Some(PathBuf::from(value)),
                "verify" => s.verify = Some(parse(key, value)?),
                _ => return Err(BenchError::Config(format!("line {}: unknown key {key:?}", lineno + 1))),
            }
        }
        Ok(s)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|source| BenchError::Io { path: path.to_path_buf(), source })?;
        Self::parse_str(&text)
    }

    /// `self` with every field that `other` sets replaced.
    pub fn overridden_by(self, other: Settings) -> Settings {
        Settings {
            family: other.family.or(self.family),
            n: other.n.or(self.n),
            blocks: other.blocks.or(self.blocks),
            delta: other.delta.or(self.delta),
            backends: other.backends.or(self.backends),
            threads: other.threads.or(self.threads),
            seed: other.seed.or(self.seed),
            tol: other.tol.or(self.tol),
            out: other.out.or(self.out),
            verify: other.verify.or(self.verify),
        }
    }

    pub fn backends_or_default(&self) -> Vec<Backend> {
        self.backends.clone().unwrap_or_else(|| vec![Backend::CwyPacked])
    }

    /// Fills in defaults and builds a config for `backend`.
    pub fn to_run_config(&self, backend: Backend) -> Result<RunConfig> {
        let family = self.family.unwrap_or(Family::Type2);
        let seed = self.seed.unwrap_or(1);
        let delta = self.delta.unwrap_or(1e-4);
        let matrix = match family {
            Family::GluedWilkinson => {
                if self.n.is_some() && self.blocks.is_none() {
                    return Err(BenchError::Config("glued matrices are sized with blocks, not n".into()));
                }
                MatrixSpec { family, size: self.blocks.unwrap_or(5), seed, delta }
            }
            _ => MatrixSpec { family, size: self.n.unwrap_or(100), seed, delta },
        };
        let cfg = RunConfig {
            matrix,
            backend,
            threads: self.threads.unwrap_or(1),
            seed,
            tol: self.tol,
            output_path: self.out.clone(),
            verify: self.verify.unwrap_or(false),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

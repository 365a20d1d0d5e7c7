//! Thread-pool executor for the row-block kernels.

use std::ops::Range;

use cwyinvit::exec::partition;
use cwyinvit::{RowExecutor, Serial};
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuildError, ThreadPoolBuilder};

/// Runs row blocks and independent tasks on a dedicated rayon pool.
pub struct RayonExecutor {
    pool: ThreadPool,
    threads: usize,
}

impl RayonExecutor {
    pub fn new(threads: usize) -> Result<Self, ThreadPoolBuildError> {
        let threads = threads.max(1);
        let pool = ThreadPoolBuilder::new().num_threads(threads).build()?;
        Ok(Self { pool, threads })
    }
}

impl RowExecutor for RayonExecutor {
    fn workers(&self) -> usize {
        self.threads
    }

    fn launch<F>(&self, rows: Range<usize>, out: &mut [f64], width: usize, kernel: F) -> Vec<f64>
    where
        F: Fn(Range<usize>, &mut [f64], &mut [f64]) + Sync,
    {
        let blocks = partition(rows.clone(), self.threads);
        if blocks.len() == 1 {
            let mut acc = vec![0.0; width];
            kernel(rows, out, &mut acc);
            return acc;
        }
        let mut outs: Vec<&mut [f64]> = Vec::with_capacity(blocks.len());
        if out.is_empty() {
            outs.resize_with(blocks.len(), Default::default);
        } else {
            let mut rest = out;
            for b in &blocks {
                let (head, tail) = rest.split_at_mut(b.len());
                outs.push(head);
                rest = tail;
            }
        }
        let partials: Vec<Vec<f64>> = self.pool.install(|| {
            blocks
                .into_par_iter()
                .zip(outs)
                .map(|(block, o)| {
                    let mut acc = vec![0.0; width];
                    kernel(block, o, &mut acc);
                    acc
                })
                .collect()
        });
        let mut sum = vec![0.0; width];
        for p in partials {
            for (s, v) in sum.iter_mut().zip(p) {
                *s += v;
            }
        }
        sum
    }

    fn map_tasks<R, F>(&self, count: usize, task: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync,
    {
        let task = &task;
        self.pool.install(|| (0..count).into_par_iter().map(task).collect())
    }
}

/// Executor chosen by thread count: `threads == 1` runs the strictly serial
/// path, anything larger a dedicated pool.
pub enum Executor {
    Serial(Serial),
    Pool(RayonExecutor),
}

impl Executor {
    pub fn new(threads: usize) -> Result<Self, ThreadPoolBuildError> {
        if threads <= 1 {
            Ok(Executor::Serial(Serial))
        } else {
            RayonExecutor::new(threads).map(Executor::Pool)
        }
    }
}

impl RowExecutor for Executor {
    fn workers(&self) -> usize {
        match self {
            Executor::Serial(e) => e.workers(),
            Executor::Pool(e) => e.workers(),
        }
    }

    fn launch<F>(&self, rows: Range<usize>, out: &mut [f64], width: usize, kernel: F) -> Vec<f64>
    where
        F: Fn(Range<usize>, &mut [f64], &mut [f64]) + Sync,
    {
        match self {
            Executor::Serial(e) => e.launch(rows, out, width, kernel),
            Executor::Pool(e) => e.launch(rows, out, width, kernel),
        }
    }

    fn map_tasks<R, F>(&self, count: usize, task: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync,
    {
        match self {
            Executor::Serial(e) => e.map_tasks(count, task),
            Executor::Pool(e) => e.map_tasks(count, task),
        }
    }
}

use rayon::prelude::*;
use rayon::ThreadPool;

use crate::config::{FileConfig, RunConfig};
use crate::error::{CliError, Result};
use crate::output::Emitter;

mod grasp;
mod hsa;
mod sll;

pub use grasp::{fit_check, payload, predict_pull};
pub use hsa::{ctau, hsa};
pub use sll::{calibrate, sweep_flat, sweep_triangles};

pub struct Ctx {
    pub run: RunConfig,
    pub emit: Emitter,
    pool: ThreadPool,
}

impl Ctx {
    pub fn new(run: RunConfig, emit: Emitter) -> Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(run.workers)
            .build()
            .map_err(|e| CliError::config(format!("worker pool: {e}")))?;
        Ok(Ctx { run, emit, pool })
    }

    pub fn cfg(&self) -> &FileConfig {
        &self.run.file
    }

    /// Maps `f` over `items` on the worker pool; results keep input order.
    pub fn par_map<T: Sync, R: Send>(&self, items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
        self.pool.install(|| items.par_iter().map(f).collect())
    }
}

//! Rayon-backed executor. Results come back in task order, so the output of
//! a run does not depend on the thread count.

use magic_meter_core::exec::Executor;
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

use crate::error::{Error, Result};

pub struct Rayon {
    pool: ThreadPool,
}

impl Rayon {
    /// `threads = None` uses every available core.
    pub fn new(threads: Option<usize>) -> Result<Self> {
        if threads == Some(0) {
            return Err(Error::Semantic("--threads must be at least 1".into()));
        }
        let pool = ThreadPoolBuilder::new()
            .num_threads(threads.unwrap_or(0))
            .build()
            .map_err(|e| Error::Semantic(format!("cannot start the thread pool: {e}")))?;
        Ok(Rayon { pool })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for Rayon {
    fn run<T, F>(&self, count: usize, task: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool.install(|| (0..count).into_par_iter().map(task).collect())
    }
}

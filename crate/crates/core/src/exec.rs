//! Task fan-out for instance loops.
//!
//! Results come back in task order and every task draws from its own RNG
//! stream, so the output does not depend on how tasks are scheduled.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Runs `count` independent tasks and collects their results in index order.
pub trait Executor: Sync {
    fn run<T, F>(&self, count: usize, task: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs tasks one after another on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn run<T, F>(&self, count: usize, task: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..count).map(task).collect()
    }
}

/// RNG for task `index` of a run seeded with `seed`: stream `index` of the
/// ChaCha8 generator keyed by `seed`.
pub fn task_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Collects a fallible task list, returning the lowest-index error.
pub fn try_run<E, T, F, X>(exec: &E, count: usize, task: F) -> Result<Vec<T>, X>
where
    E: Executor + ?Sized,
    T: Send,
    X: Send,
    F: Fn(usize) -> Result<T, X> + Sync + Send,
{
    exec.run(count, task).into_iter().collect()
}

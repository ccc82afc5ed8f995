use dimwit_core::Executor;
use rayon::prelude::*;

/// Runs jobs on a dedicated rayon pool. Results come back in index order, so
/// reductions are identical to the sequential executor.
pub struct Parallel {
    pool: rayon::ThreadPool,
}

impl Parallel {
    /// `jobs = None` uses the `JOBS` environment variable when set, otherwise
    /// the available parallelism.
    pub fn new(jobs: Option<usize>) -> Self {
        let jobs = jobs
            .or_else(|| std::env::var("JOBS").ok().and_then(|j| j.parse().ok()))
            .or_else(|| std::thread::available_parallelism().ok().map(|n| n.get()))
            .unwrap_or(1)
            .max(1);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        Self { pool }
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for Parallel {
    fn map<T, F>(&self, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool
            .install(|| (0..count).into_par_iter().map(f).collect())
    }
}

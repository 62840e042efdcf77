//! Execution policy for per-example loops.
//!
//! Every dataset-level operation in this crate maps an independent function
//! over examples. `ExecPolicy` decides whether that map runs on a rayon
//! thread pool or a plain sequential loop. Output order always equals input
//! order, so results are identical either way; parallelism only changes
//! wall-clock time.
//!
//! Compiled without the `parallel` feature, every policy degrades to the
//! sequential loop.

/// Worker-count policy for data-parallel loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ExecPolicy {
    /// Cap on worker threads. `None` uses the rayon default (one per core);
    /// `Some(1)` guarantees serial execution.
    pub jobs: Option<usize>,
}

impl ExecPolicy {
    pub fn with_jobs(jobs: usize) -> Self {
        Self { jobs: Some(jobs) }
    }

    pub fn serial() -> Self {
        Self { jobs: Some(1) }
    }

    #[cfg(feature = "parallel")]
    fn wants_parallel(&self) -> bool {
        self.jobs != Some(1) && self.jobs != Some(0)
    }

    /// Maps `f` over `items`, preserving input order in the output.
    ///
    /// Runs on a thread pool only when the `parallel` feature is on, the
    /// policy allows more than one worker, and the caller's backends are
    /// `concurrency_safe`; otherwise the loop is sequential. `f` must be
    /// deterministic per item for outputs to be run-independent, which all
    /// callers in this crate guarantee via per-example derived seeds.
    pub fn map_indexed<T, U, F>(&self, items: &[T], concurrency_safe: bool, f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(usize, &T) -> U + Send + Sync,
    {
        #[cfg(feature = "parallel")]
        {
            if concurrency_safe && self.wants_parallel() && items.len() > 1 {
                return self.par_map_indexed(items, f);
            }
        }
        let _ = concurrency_safe;
        items.iter().enumerate().map(|(i, t)| f(i, t)).collect()
    }

    #[cfg(feature = "parallel")]
    fn par_map_indexed<T, U, F>(&self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(usize, &T) -> U + Send + Sync,
    {
        use rayon::prelude::*;

        let run = || items.par_iter().enumerate().map(|(i, t)| f(i, t)).collect();
        match self.jobs {
            Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                Ok(pool) => pool.install(run),
                // Pool creation can fail under resource limits; the
                // sequential result is identical.
                Err(_) => items.iter().enumerate().map(|(i, t)| f(i, t)).collect(),
            },
            None => run(),
        }
    }
}

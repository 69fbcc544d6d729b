//! Deterministic fan-out over independent work items.
//!
//! Results are always collected in input order, so any reduction built on
//! [`Executor::map`] is identical for every worker count; the `jobs` knob
//! only changes wall-clock time. With the `parallel` feature disabled the
//! executor degrades to a plain sequential loop.

use std::fmt;

pub struct Executor {
    jobs: usize,
    #[cfg(feature = "parallel")]
    pool: Option<rayon::ThreadPool>,
}

impl Executor {
    /// `jobs = 0` selects the machine's available parallelism.
    pub fn new(jobs: usize) -> Self {
        let jobs = if jobs == 0 {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        } else {
            jobs
        };
        #[cfg(feature = "parallel")]
        let pool = (jobs > 1).then(|| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .expect("failed to build worker pool")
        });
        Executor {
            jobs,
            #[cfg(feature = "parallel")]
            pool,
        }
    }

    pub fn sequential() -> Self {
        Self::new(1)
    }

    /// Configured worker count. Without the `parallel` feature the work still
    /// runs sequentially regardless of this value.
    pub fn jobs(&self) -> usize {
        self.jobs
    }

    pub fn map<T, R>(&self, items: &[T], f: impl Fn(&T) -> R + Send + Sync) -> Vec<R>
    where
        T: Sync,
        R: Send,
    {
        #[cfg(feature = "parallel")]
        if let Some(pool) = &self.pool {
            use rayon::prelude::*;
            return pool.install(|| items.par_iter().map(&f).collect());
        }
        items.iter().map(f).collect()
    }
}

impl Default for Executor {
    fn default() -> Self {
        Self::new(0)
    }
}

impl fmt::Debug for Executor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Executor")
            .field("jobs", &self.jobs)
            .finish()
    }
}

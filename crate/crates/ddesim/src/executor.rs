use std::time::Instant;

use ddesim_core::CellExecutor;
use rayon::prelude::*;

/// Runs sweep cells on a dedicated rayon pool.
///
/// Results come back in cell order whatever the scheduling, so output does not
/// depend on the worker count.
pub struct Parallel {
    pool: rayon::ThreadPool,
}

impl Parallel {
    /// `workers == 0` means one per available core.
    pub fn new(workers: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()?;
        Ok(Self { pool })
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl CellExecutor for Parallel {
    fn execute<T, F>(&self, count: usize, cell: F) -> Vec<(T, f64)>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool.install(|| {
            (0..count)
                .into_par_iter()
                .map(|i| {
                    let start = Instant::now();
                    let out = cell(i);
                    (out, start.elapsed().as_secs_f64())
                })
                .collect()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let exec = Parallel::new(4).unwrap();
        assert_eq!(exec.workers(), 4);
        let out: Vec<usize> = exec
            .execute(100, |i| i * i)
            .into_iter()
            .map(|(v, _)| v)
            .collect();
        assert_eq!(out, (0..100).map(|i| i * i).collect::<Vec<_>>());
    }
}

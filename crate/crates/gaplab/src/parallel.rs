//! Bounded worker pool for independent experiment points. Results come back
//! in input order, so output never depends on the number of workers.

use rayon::prelude::*;

use crate::error::{Error, Result};

pub const WORKERS_ENV: &str = "GAPLAB_WORKERS";

pub fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|n| *n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

#[derive(Debug)]
pub struct Pool {
    inner: rayon::ThreadPool,
}

impl Pool {
    pub fn new(workers: usize) -> Result<Self> {
        if workers == 0 {
            return Err(Error::input("worker count must be at least 1"));
        }
        let inner = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::input(format!("thread pool: {e}")))?;
        Ok(Pool { inner })
    }

    pub fn workers(&self) -> usize {
        self.inner.current_num_threads()
    }

    /// Runs `f` on every item; the first error in input order wins.
    pub fn map<T, U, E, F>(&self, items: Vec<T>, f: F) -> std::result::Result<Vec<U>, E>
    where
        T: Send,
        U: Send,
        E: Send,
        F: Fn(T) -> std::result::Result<U, E> + Sync + Send,
    {
        let out: Vec<_> = self.inner.install(|| items.into_par_iter().map(f).collect());
        out.into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        for w in [1, 3] {
            let pool = Pool::new(w).unwrap();
            let v: Vec<u64> = pool.map((0..100u64).collect(), |i| Ok::<_, ()>(i * i)).unwrap();
            assert_eq!(v, (0..100u64).map(|i| i * i).collect::<Vec<_>>());
        }
        assert!(Pool::new(0).is_err());
    }

    #[test]
    fn first_error_in_order() {
        let pool = Pool::new(4).unwrap();
        let r = pool.map((0..50).collect(), |i| if i % 7 == 6 { Err(i) } else { Ok(i) });
        assert_eq!(r, Err(6));
    }
}

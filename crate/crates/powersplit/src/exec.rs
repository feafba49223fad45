use rayon::prelude::*;

use powersplit_core::Executor;

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "POWERSPLIT_THREADS";

/// Runs work items on the current rayon pool; results keep index order.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rayon;

impl Executor for Rayon {
    fn map<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..len).into_par_iter().map(f).collect()
    }
}

/// Worker count from the flag, else the environment, else rayon's default
/// (`0`).
pub fn resolve_threads(flag: Option<usize>) -> Result<usize, String> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("{THREADS_ENV}={v:?} is not a worker count")),
        Err(_) => Ok(0),
    }
}

/// Runs `f` inside a pool of `threads` workers (`0` = one per core).
pub fn with_pool<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> Result<R, String> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| e.to_string())?;
    Ok(pool.install(f))
}

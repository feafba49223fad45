//! Pluggable map executor.
//!
//! The heavy operations (per-player DP, sampling chunks, split scans,
//! experiment games) are expressed as an indexed map followed by an
//! order-preserving collect, so any executor yields bit-identical results.

use alloc::vec::Vec;

pub trait Executor: Sync {
    /// Returns `[f(0), f(1), ..., f(len - 1)]` in index order.
    fn map<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs everything on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..len).map(f).collect()
    }
}

//! Shapley–Shubik and Banzhaf power indices for weighted voting games, and
//! analysis of false-name manipulations: weight splitting, merging and
//! annexation.
//!
//! The crate is `no_std` (it needs `alloc`). IO, file formats, threading and
//! the command-line front end live in the `powersplit` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod count;
mod tables;

pub mod error;
pub mod exact;
pub mod exec;
pub mod experiments;
pub mod game;
pub mod manipulation;
pub mod mc;
pub mod rational;

pub use error::{Error, Result};
pub use exact::{CriticalCounts, IndexKind, IndexVector, ShapleyPivotTable};
pub use exec::{Executor, Sequential};
pub use game::{
    AnnexSpec, Coalition, Game, MergeOutcome, MergeSpec, Outcome, SplitOutcome, SplitSpec,
};

//! IO, file formats, threading and the command-line front end for
//! `powersplit-core`.

pub mod cli;
pub mod exec;
pub mod formats;
pub mod report;
pub mod stats;
pub mod verify;

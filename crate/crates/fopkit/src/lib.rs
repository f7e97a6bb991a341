//! Text formats, multi-threaded drivers and the `fopkit` command line on top
//! of [`fopkit_core`].

pub mod cli;
pub mod io;
pub mod parallel;
pub mod report;

pub use fopkit_core;

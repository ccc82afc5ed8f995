//! Parallel execution, matrix files, reports and the `dimwit` command line
//! on top of `dimwit-core`.

pub mod cli;
pub mod io;
pub mod parallel;
pub mod report;

pub use parallel::Parallel;

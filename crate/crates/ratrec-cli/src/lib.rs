//! Command-line front end and sweep machinery for `ratrec`.

mod cli;
pub mod config;
pub mod emit;
pub mod sweep;

pub use cli::run_cli;

//! Library half of the `qi` command: expression parsing, operator dispatch,
//! convergence studies and CSV output.

pub mod app;
pub mod config;
pub mod error;
pub mod expr;
pub mod ops;
pub mod output;
pub mod study;

pub use error::{CliError, Result};

//! Command-line front end: polynomial expression parsing, operator files,
//! machine-readable output, and dispatch.

pub mod commands;
pub mod expr;
pub mod opfile;
pub mod output;

pub use commands::{run, CommandResult};

//! Batch front-end for `rkhs-core`: kernel specification parsing, point and
//! matrix file formats, identity suites and report rendering.

pub mod commands;
pub mod error;
pub mod formats;
pub mod points;
pub mod render;
pub mod spec;
pub mod suites;

pub use commands::{execute, Command, Format, Outcome, Verb};
pub use error::{CliError, ParseError, Result};

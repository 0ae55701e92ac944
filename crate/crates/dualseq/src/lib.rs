//! Document format, JSON reports and command dispatch for `dualseq`.

pub mod commands;
pub mod document;
pub mod dto;
pub mod error;
pub mod lexer;

pub use commands::{run, Cli, Command};
pub use document::{parse, AnyDocument, Document};
pub use error::CliError;

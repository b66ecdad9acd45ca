//! Graph files, reports, DOT export and the command line front end for
//! `plumbroot-core`.

pub mod cli;
pub mod dot;
pub mod error;
pub mod format;
pub mod report;

pub use error::{exit, Error};
pub use format::{parse_graph, ParseError};

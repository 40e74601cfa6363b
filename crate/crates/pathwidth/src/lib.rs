//! File formats and the command-line front end for `pathwidth-core`.

pub mod cli;
pub mod formats;

pub use formats::{parse_decomposition, parse_graph, write_decomposition, write_graph, ParseError, PdFile};

//! Library surface of the command line tool: the algebra file grammar, the
//! expression parsers, the report format and the command implementations.

pub mod commands;
pub mod parse;
pub mod report;

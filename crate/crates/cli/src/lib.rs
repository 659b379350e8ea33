//! Library side of the `ksl` command-line tool: command payload builders,
//! deterministic serialization, and the named verification suites.

pub mod commands;
pub mod output;
pub mod verify;

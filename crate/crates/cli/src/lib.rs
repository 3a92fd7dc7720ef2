//! IO companion to `nowait-core`: text formats for instances and
//! solutions, JSON trace documents, deterministic generators, the
//! acceptance bench harness, and the `nowait` command line tool.

pub mod bench;
pub mod cli;
pub mod format;
pub mod gen;
pub mod trace;

pub use cli::{execute, exit_code, guard, Cli, CliError};

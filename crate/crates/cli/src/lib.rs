//! File formats and command-line front end for the QUBO toolkit.
//!
//! The binary is a thin wrapper over [`commands::run`]; everything is also
//! usable as a library, which is how the integration tests drive it.

pub mod commands;
pub mod formats;
pub mod output;

pub use commands::run;

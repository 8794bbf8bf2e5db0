//! Command-line front end for the `lscat-core` library: file formats,
//! report models and command implementations.

pub mod commands;
pub mod format;
pub mod report;

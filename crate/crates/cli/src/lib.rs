//! Document schemas and command implementations behind the `kahler` binary.

pub mod commands;
pub mod docs;

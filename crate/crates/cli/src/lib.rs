//! Command-line front end for `qchancap-core`: channel specifications,
//! command runners, and reproducible JSON output with run manifests.

pub mod commands;
pub mod error;
pub mod manifest;
pub mod spec;

pub use commands::Invocation;
pub use error::{CliError, CliResult};
pub use manifest::{Document, RunManifest, SCHEMA};
pub use spec::{ChannelSpec, InputSpec};

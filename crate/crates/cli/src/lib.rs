//! Command-line front end: catalog listing, plan generation, verification
//! reports and oracle checks over the JSON plan container.

pub mod commands;
pub mod document;
pub mod error;
pub mod render;
pub mod report;

pub use commands::{run, Cli};
pub use document::PlanDocument;
pub use error::{exit, CliError};

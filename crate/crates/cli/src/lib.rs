//! Command-line front end: JSON schemas, the bundled examples and report rendering.

pub mod app;
pub mod corpus;
pub mod error;
pub mod json;

pub use app::run;
pub use error::CliError;

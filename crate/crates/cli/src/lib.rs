//! Configuration, suite harness and reports behind the `parstruct` binary.

pub mod catalog;
pub mod config;
pub mod evaluate;
pub mod reader;
pub mod report;
pub mod suites;

pub use config::{load_config, parse_config, ConfigError, SpecConfig};
pub use report::{Report, Status, SuiteResult, Verdict};
pub use suites::{run_suites, Suite};

//! Data interchange: delimited series tables, system definition configs,
//! and the structured-text reports emitted by the command-line tool.

pub mod config;
pub mod report;
pub mod table;

pub use config::{parse_config, read_config, SystemConfig};
pub use report::{format_analysis, format_benchmark, format_window};
pub use table::{format_table, parse_table, read_table, write_table};

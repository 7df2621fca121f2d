//! Library side of the `condcompat` binary: input parsing, report rendering
//! and the three subcommands.

pub mod commands;
pub mod input;
pub mod report;

pub use commands::{check, dmatrix, lp, CliError, Format, Outcome, Space};
pub use input::{load_pair, InputError, InputOptions, Renormalization};
pub use report::ReportDocument;

//! Command-line front end for `lpdo-core`: polynomial text format, report
//! rendering and the `lpdo` subcommands.

pub mod app;
pub mod expr;
pub mod report;

pub use app::{run, Outcome};
pub use expr::{format_poly, parse_poly, ExprError};

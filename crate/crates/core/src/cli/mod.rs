//! Definition files, check suites and reports for the command line tool.

pub mod ast;
pub mod parse;
pub mod resolve;
pub mod suite;

pub use ast::Document;
pub use parse::{parse_document, parse_expr, DocError, FORMAT_VERSION};
pub use resolve::{eval, parse_definitions, Definitions, ResolveOptions};
pub use suite::{run_suite, Check, Report, Status, Suite, SuiteOptions, UnknownSuite};

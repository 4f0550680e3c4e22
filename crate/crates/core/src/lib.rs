//! Exact computer algebra for commutative monoid objects, their fraction-field
//! objects and schemes presented by finite chart diagrams.

pub mod cli;
pub mod error;
pub mod fpcat;
pub mod fracfield;
pub mod kernel;
pub mod monoid;
pub mod presheaf;
pub mod scheme;

pub use error::{Error, Result};

//! Exact lattice arithmetic for polarised complex tori.

pub mod doc;
pub mod elliptic;
pub mod error;
pub mod examples;
pub mod gallery;
pub mod homs;
pub mod json;
pub mod linalg;
pub mod parse;
pub mod ppsearch;
pub mod scalars;
pub mod torus;

pub use error::{Error, Result};

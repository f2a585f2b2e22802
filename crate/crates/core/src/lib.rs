pub mod algebra;
pub mod cli;
pub mod contour;
pub mod diffcheck;
pub mod error;
pub mod expr;
pub mod integrate;
pub mod selftest;
pub mod transcendental;

pub use algebra::{AlgebraLevel, BasisTable, CDNumber};
pub use error::{Error, Result};
pub use expr::{parse, Phrase};

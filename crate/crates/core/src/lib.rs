pub mod analysis;
#[cfg(feature = "cli")]
pub mod cli;
pub mod complexity;
pub mod config;
pub mod decompose;
pub mod error;
pub mod factors;
pub mod generators;
pub mod palindromes;
pub mod rauzy;
pub mod returns;
mod report;
pub mod words;

pub use error::{Error, Result};
pub use words::{Alphabet, Antimorphism, Letter, Morphism, Word};

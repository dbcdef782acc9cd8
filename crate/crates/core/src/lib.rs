//! Associative spectra of finite groupoids.
//!
//! [`bracketing`] holds the combinatorics of full binary trees, [`groupoid`]
//! finite Cayley tables and their builders, [`spectrum`] the engine counting
//! distinct term functions per arity, and [`families`] closed-form and
//! symbolic counts used as independent oracles.

pub mod bracketing;
pub mod error;
pub mod families;
pub mod groupoid;
pub mod spectrum;

pub use bracketing::{catalan, enumerate, parse, Bracketing};
pub use error::{Error, Result};
pub use groupoid::{Element, Groupoid};
pub use spectrum::{spectrum, Spectrum, SpectrumOptions, TermFunction};

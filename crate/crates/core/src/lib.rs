//! Normal and Liouville-normal binary sequences along Følner sequences in
//! (N, +) and (N, x): constructions, exact block counting, densities and
//! configuration searches.

pub mod champernowne;
pub mod config;
pub mod error;
pub mod folner;
pub mod io;
pub mod liouville;
pub mod primes;
pub mod sampler;
pub mod seq;
pub mod structure;

pub use error::{Error, Result};

//! Search for APN permutations with a nontrivial linear self-equivalence.

pub mod classify;
pub mod cli;
pub mod dedup;
pub mod error;
pub mod gf2;
pub mod prune;
pub mod search;
pub mod vbf;

pub use error::{Error, Result};

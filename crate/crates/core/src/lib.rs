//! Exact tools for Sherali-Adams and Lovász-Schrijver lifts of symmetric,
//! integer-empty 0/1 polytopes.

pub mod certificate;
pub mod cli;
pub mod config;
pub mod error;
pub mod exact;
pub mod instances;
pub mod lp;
pub mod ls;
pub mod par;
pub mod perm;
pub mod polytope;
pub mod report;
pub mod sa;
pub mod subset;
pub mod theorem;

pub use config::Limits;
pub use error::{Error, Result};
pub use exact::{RMatrix, RVector, Rational};

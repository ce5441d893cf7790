//! Block-rigid groups with cyclic regulator quotient: standard forms,
//! near-isomorphism invariants, indecomposable decomposition spectra, and
//! bounded realizability search for partition families.
//!
//! The main entry points:
//! - [`partitions`]: partition families, the hook condition, C(n,k) and S(n,k)
//! - [`groups`]: standard-form pieces, direct sums, mu-invariants, frames
//! - [`decomp`]: decomposition enumeration and partition spectra
//! - [`constructions`]: corner groups, chain groups, worked example groups
//! - [`search`]: obstruction screening, realizer search, the verdict table
//! - [`json`]: serialized group and report schemas

pub mod arith;
pub mod constructions;
pub mod decomp;
pub mod error;
pub mod groups;
pub mod json;
pub mod partitions;
pub mod search;
pub mod types;

pub use error::{Error, Result, ValidationReport, Violation, ViolationCode};

//! Pisano periods, place-value digit periods of the Fibonacci sequence and
//! empirical normality statistics of the Fibonacci concatenation.
//!
//! * [`fibcore`]: modular Fibonacci arithmetic, Pisano periods (direct
//!   iteration and factored LCM), factorization, Wall–Sun–Sun checks and the
//!   zero-count class ω(m).
//! * [`digitlab`]: the digit sequence occupying the `base^k` place of
//!   successive Fibonacci numbers, exact digit and residue counts, Υ search and
//!   running percentages.
//! * [`concat`]: exact Fibonacci values as base-β digit vectors, the
//!   concatenated expansion `.0112358132134…` and string frequencies.
//!
//! Everything is exact: counts are integers and frequencies are rationals.

pub mod budget;
pub mod concat;
pub mod digitlab;
mod error;
pub mod fibcore;
pub mod render;

pub use budget::Budget;
pub use error::{Error, Incomplete, Result};

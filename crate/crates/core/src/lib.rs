//! Exact q-series arithmetic for partitions into distinct parts that avoid
//! two residue classes, together with an executable catalog of theta-function
//! identities and a verifier for the resulting Ramanujan-type congruences.
//!
//! - [`series`]: truncated power series over `Z` or `Z/mZ`
//! - [`qfactory`]: Pochhammer products, eta quotients, theta functions
//! - [`oracle`]: dynamic-programming partition counts used as ground truth
//! - [`identities`]: theta-function identities and dissections as checks
//! - [`theorems`]: congruence claims and their verification
//! - [`scanner`]: empirical search for vanishing progressions
//! - [`runner`]: the default check plan and parallel execution
//! - [`cli`]: the `qpart` command line

pub mod cli;
pub mod error;
pub mod identities;
pub mod oracle;
pub mod qfactory;
pub mod report;
pub mod runner;
pub mod scanner;
pub mod series;
pub mod theorems;

pub use error::{Error, Result};
pub use series::{Comparison, Mismatch, Ring, Series, SeriesError};

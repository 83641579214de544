//! Hard random binary CSP workbench.
//!
//! * [`csp`]: instances, assignments and the incremental search state.
//! * [`modelrb`]: Model RB generators, plain and forced-satisfiable.
//! * [`ulsa`]: the unweighted local search solver.
//! * [`target`]: partial solutions that satisfy `T` of `n` variables.
//! * [`misbridge`]: conversion to and from the maximum independent set graph.
//! * [`bench`]: multi-run harness, runtime distributions and fits.

pub mod bench;
pub mod csp;
mod error;
pub mod misbridge;
pub mod modelrb;
pub mod rng;
pub mod target;
pub mod ulsa;

pub use error::{Error, Result};

//! Binary CSP instances, assignments and the incremental search state.

mod assignment;
pub mod format;
mod instance;
mod state;

pub use assignment::Assignment;
pub use format::{emit_csp, parse_csp, CspFile};
pub use instance::{Constraint, CspInstance, Value, Var};
pub use state::{conflict_count, SearchState};

//! Check batteries over single Weyl elements and whole sweeps.
//!
//! Every check compares two independently computed sides and records a
//! failure with both sides in canonical text. Failures are report entries,
//! never errors.

mod checks;
mod report;
mod sweep;

pub use checks::{cross_checks, verify_element, verify_element_with, verify_forward, CheckOptions};
pub use report::{CheckRecord, CheckReport, CheckStatus, FirstFailure, Part, SweepReport, Tally};
pub use sweep::{mutation_sweep, verify_sweep, MutationReport, SweepConfig, SweepMode};

//! Experiment runner for the `qls-core` solvers: builds problem sets from a
//! JSON config, runs solvers, and writes records, forward-error tables,
//! performance profiles and residual-gap traces.

pub mod config;
mod error;
pub mod profile;
pub mod records;
pub mod suite;
pub mod table;
pub mod trace;

pub use config::{ExperimentConfig, Family, NamedProblem, SolverKind, DEFAULT_EPS};
pub use error::{BenchError, Result};
pub use profile::{emit_profile_svg, performance_profile, ProfileCurve};
pub use records::{emit_records, load_records, Format};
pub use suite::{run_suite, BenchRecord, RunStatus};
pub use table::report_table;
pub use trace::trace_residual_gap;

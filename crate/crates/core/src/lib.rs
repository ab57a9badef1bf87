//! MOEA/D-DE with epigenetic crossover blocking for dynamic bi-objective
//! optimisation.
//!
//! The crate bundles the algorithm ([`moead`], [`epigenetics`]), the FDA, JY
//! and UDF benchmark suites ([`problems`]), IGD bookkeeping ([`metrics`]), the
//! Wilcoxon signed-rank test ([`stats`]) and a driver for complete dynamic
//! runs ([`run`]).

pub mod epigenetics;
mod error;
pub mod metrics;
pub mod moead;
pub mod problems;
pub mod run;
pub mod stats;

pub use epigenetics::{BlockingPolicy, BlockingVariant, ScheduleSpan};
pub use error::{Error, Result};
pub use metrics::{IgdTrace, TracePoint};
pub use moead::{AlgorithmState, DEParams};
pub use problems::{Category, Problem, ProblemKind, TimeModel};
pub use run::{run_dynamic, BudgetPlan, RunOutcome, RunSettings};

//! Seeded sweeps over the inequality catalog, counterexample search,
//! probes of the open regions and the explicit counterexample.
//!
//! Trial `j` of a cell draws its inputs from a generator seeded with
//! `base_seed + id * 10^6 + j`, where `id` is derived from the cell's
//! content (case, parameter, dimension, ensemble).

mod probe;
mod repro;
mod search;
mod sweep;
mod target;

pub use probe::{probe_conjecture, ProbeRegion};
pub use repro::{
    closed_forms, counterexample_pair, equality_cases, repro_counterexample, repro_row, ReproRow,
    REPRO_TOL_REL,
};
pub use search::{search_counterexample, search_target, SearchResult, REFINEMENT_STEPS};
pub use sweep::{
    reproduce_trial, run_sweep, run_sweep_with_records, Cell, CellSummary, SweepPlan,
    SweepSummary, MAX_TRIALS_PER_CELL,
};
pub use target::{Target, TrialInputs, IDENTITY_TOL_REL};

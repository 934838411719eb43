//! Independent sets, level maps, and the insertion search that grows `S_P`
//! into atomistic lattices of the same length.

mod best;
mod independent;
mod search;

pub use best::{best_extensions, best_from_input, geometric_outputs, m_violation, satisfies_m, ExtensionResult};
pub use independent::{IndependentFamily, Levels};
pub use search::{
    candidate_insertions, enumerate_outputs, run_deterministic, trace_to, Condition, Enumeration, Mode,
    SearchInput, SearchOptions, SearchState, TraceEntry, DEFAULT_BUDGET,
};

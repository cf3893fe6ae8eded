//! Proof machinery as executable oracles: chunk decomposition, connected
//! components, removal-time bounds, the closed-form threshold lower bound,
//! and the causal-lattice condition checker.

pub mod bound;
pub mod chunks;
pub mod conditions;
pub mod oracle;

pub use bound::{default_q, pth_lower_bound};
pub use chunks::{cell_metric, connected_components, decompose_chunks, ChunkDecomposition};
pub use conditions::{check_causal_conditions, ConditionsReport};
pub use oracle::{lemma_suite, lift_cells, removal_time_oracle, steps_to_removal, SuiteReport};

#[cfg(test)]
mod tests;

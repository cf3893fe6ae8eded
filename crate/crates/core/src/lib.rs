//! Simulator for sweep-rule cellular-automaton decoders of toric codes.
//!
//! The crate is organized around a small stack of layers:
//!
//! - [`complex`]: F2 chain arithmetic over finite cell complexes (chains,
//!   boundary operators, incidence queries).
//! - [`lattices`]: builders for the concrete lattices (3-torus cubic and bcc,
//!   2D square and parallelogram) together with the causal structure induced
//!   by a sweep direction: partial order, causal distance, causal diamonds,
//!   and the precomputed per-vertex flip tables.
//! - [`sweep`]: the sweep rule and greedy sweep rule as deterministic
//!   two-phase cellular-automaton updates on a syndrome.
//! - [`decoder`]: the decoding loop with termination control and homology
//!   classification of the residual error.
//! - [`noise`]: the phenomenological noise model and multi-cycle memory
//!   experiment.
//! - [`montecarlo`]: failure-rate estimation, threshold extraction from
//!   finite-size-scaling fits, and the sustainable-threshold ansatz fit.
//! - [`verify`]: executable oracles for the chunk decomposition, connected
//!   components, removal-time bounds, the closed-form threshold lower bound
//!   and the causal-lattice condition checker.

pub mod bits;
pub mod complex;
pub mod decoder;
pub mod error;
pub mod lattices;
pub mod montecarlo;
pub mod noise;
pub mod sweep;
pub mod verify;

pub use complex::{CellComplex, Chain, Syndrome};
pub use decoder::{classify, decode, DecodeOutcome, DecodeStatus};
pub use error::{ComplexError, FitError, LatticeError, VerifyError};
pub use lattices::{Lattice, LatticeFamily, LatticeSpec, SweepDirection};
pub use noise::{NoiseParams, TrialOutcome, TrialRecord};
pub use sweep::{Rule, Ruleset, SweepConfig};

//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("dimension mismatch: expected a {expected}-chain, got a {got}-chain")]
    DimensionMismatch { expected: u8, got: u8 },
    #[error("chains belong to different complexes")]
    ComplexMismatch,
    #[error("cell index {index} out of range for dimension {dim} ({count} cells)")]
    InvalidCell { dim: u8, index: u32, count: u32 },
    #[error("invalid complex description: {0}")]
    Schema(String),
}

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("invalid lattice spec: {0}")]
    InvalidSpec(String),
    #[error("sweep direction {direction:?} is perpendicular to an edge with delta {edge_delta:?}")]
    PerpendicularEdge {
        direction: Vec<i64>,
        edge_delta: Vec<i64>,
    },
    #[error("vertex set spans a region too large for a consistent partial order (diameter must be < L/2)")]
    RegionTooLarge,
    #[error("no infimum exists for the requested vertex set")]
    NoInfimum,
    #[error("no supremum exists for the requested vertex set")]
    NoSupremum,
    #[error("causal-structure validation failed: {0}")]
    ConditionViolation(String),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
}

#[derive(Debug, Error)]
pub enum FitError {
    #[error("curves do not bracket a common crossing: {0}")]
    NoCrossing(String),
    #[error("optimizer failed to converge: {0}")]
    Diverged(String),
    #[error("degenerate fit input: {0}")]
    Degenerate(String),
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("error configuration too large for exact chunk decomposition (|support| = {size}, limit {limit})")]
    SizeLimit { size: usize, limit: usize },
}

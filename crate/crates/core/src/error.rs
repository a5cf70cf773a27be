//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by analysis, synthesis, and verification.
#[derive(Debug, Error)]
pub enum AcfError {
    /// Malformed input: mismatched lengths, letters out of range, bad moduli.
    #[error("structural error: {0}")]
    Structure(String),

    /// A configured resource budget was exceeded.
    #[error("resource budget exceeded: {what} requires {needed}, cap is {cap}")]
    Resource {
        what: String,
        needed: u128,
        cap: u128,
    },

    /// Two basis strings live in different invariant subspaces.
    #[error("no path: {from} is in component {from_component} but {to} is in component {to_component}")]
    Reachability {
        from: String,
        to: String,
        from_component: String,
        to_component: String,
    },

    /// A strict-mode target carries a block determinant away from 1, so the
    /// relative phase it demands cannot be generated by k-local symmetric gates.
    #[error("phase obstruction: block determinants differ from 1: {0}")]
    PhaseObstruction(String),

    /// Target matrix fails validation (non-unitary, wrong shape, unknown block).
    #[error("invalid target: {0}")]
    InvalidTarget(String),

    /// A redistribution generator pair violates charge conservation.
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    /// Lie-closure iteration failed to stabilize within the round cap.
    #[error("closure did not converge: {0}")]
    NonConvergence(String),

    /// Input document failed to parse.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, AcfError>;

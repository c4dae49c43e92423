use std::fmt;

use thiserror::Error;

/// A single violated density-matrix invariant together with its magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Violation {
    /// Largest entrywise |ρ − ρ†|.
    NotHermitian { deviation: f64 },
    /// Real part of the trace.
    TraceNotOne { trace: f64 },
    /// Smallest eigenvalue.
    NotPositiveSemidefinite { min_eigenvalue: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotHermitian { deviation } => {
                write!(f, "not Hermitian (max |rho - rho^dag| = {deviation:e})")
            }
            Violation::TraceNotOne { trace } => write!(f, "trace is {trace}, expected 1"),
            Violation::NotPositiveSemidefinite { min_eigenvalue } => {
                write!(f, "not positive semidefinite (min eigenvalue {min_eigenvalue:e})")
            }
        }
    }
}

fn join(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("bad dimension: expected {expected}, got {got}")]
    BadDimension { expected: usize, got: usize },

    #[error("invalid density matrix: {}", join(.0))]
    InvalidDensity(Vec<Violation>),

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("non-finite matrix entry at ({0}, {1})")]
    NonFinite(usize, usize),

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("bad subsystem set {0:?}")]
    BadSubsystemSet(Vec<usize>),

    #[error("bad measurement settings: {0}")]
    BadSettings(String),

    #[error("state is mixed (purity {0}); a pure state is required")]
    MixedState(f64),

    #[error("mixed state has no closed-form three-tangle (purity {0})")]
    MixedStateWithoutTau(f64),

    #[error("unknown state name {0:?}")]
    UnknownName(String),

    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),

    #[error("GSD parameters not normalized (sum of squares {0})")]
    NotNormalizedParams(f64),

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("state has fewer than two steerable pairs at unit visibility (second largest S = {0})")]
    NoNonMonogamyAtUnitVisibility(f64),

    #[error("bad rank {0}; expected 1..=8")]
    BadRank(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

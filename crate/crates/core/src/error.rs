use std::fmt;

use num_bigint::BigInt;

use crate::instance::UtilityProfile;

/// Machine-readable classification of a rejected input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorCode {
    Malformed,
    InvalidNumber,
    DimensionMismatch,
    NegativeMultiplicity,
    NegativeEntry,
    OverAllocated,
    UnsupportedCombination,
    InvalidEnvyGraph,
    NotInProjection,
}

impl ErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::Malformed => "malformed",
            ErrorCode::InvalidNumber => "invalid_number",
            ErrorCode::DimensionMismatch => "dimension_mismatch",
            ErrorCode::NegativeMultiplicity => "negative_multiplicity",
            ErrorCode::NegativeEntry => "negative_entry",
            ErrorCode::OverAllocated => "over_allocated",
            ErrorCode::UnsupportedCombination => "unsupported_combination",
            ErrorCode::InvalidEnvyGraph => "invalid_envy_graph",
            ErrorCode::NotInProjection => "not_in_projection",
        }
    }
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A rejected document or argument, with the location of the offending value.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("[{code}] at {location}: {message}")]
pub struct InputError {
    pub code: ErrorCode,
    pub location: String,
    pub message: String,
}

impl InputError {
    pub fn new(code: ErrorCode, location: impl Into<String>, message: impl Into<String>) -> Self {
        InputError {
            code,
            location: location.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    Nodes,
    Pivots,
    Iterations,
}

impl fmt::Display for LimitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LimitKind::Nodes => "node",
            LimitKind::Pivots => "pivot",
            LimitKind::Iterations => "iteration",
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Input(#[from] InputError),

    /// A resource limit was hit. `iterations` and `blocked_profiles` carry
    /// the partial decision trace when the limit was hit inside the engine.
    #[error("{kind} limit of {limit} exceeded after {iterations} engine iterations")]
    Limit {
        kind: LimitKind,
        limit: u64,
        iterations: u64,
        blocked_profiles: Vec<UtilityProfile>,
    },

    #[error("enumeration cap exceeded: {count} allocations exceed the cap of {cap}")]
    EnumerationCap { count: BigInt, cap: u64 },

    #[error("integer objective is unbounded")]
    Unbounded,
}

impl Error {
    pub(crate) fn limit(kind: LimitKind, limit: u64) -> Self {
        Error::Limit {
            kind,
            limit,
            iterations: 0,
            blocked_profiles: Vec::new(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

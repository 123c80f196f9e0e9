use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An amplitude whose modulus exceeds one by more than the clamp window.
    #[error("amplitude modulus {modulus} exceeds 1 (upstream normalization is broken)")]
    AmplitudeOvershoot { modulus: f64 },

    #[error("labels belong to different coherence groups ({left} vs {right})")]
    GroupMismatch { left: String, right: String },

    #[error("mode count mismatch: {left} vs {right}")]
    ModeMismatch { left: usize, right: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The truncated Fock space is too small for the requested state.
    #[error("truncation too small: tail bound {bound:e} exceeds {limit:e} at dim {dim}")]
    Truncation { dim: usize, bound: f64, limit: f64 },

    #[error("non-finite matrix entry")]
    NonFinite,

    #[error("quadrature is defective: {0}")]
    Quadrature(String),

    #[error("unknown {kind} '{name}' (registered: {known})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        known: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

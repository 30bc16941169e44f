use thiserror::Error;

use crate::extreal::ExtReal;

/// Errors raised by the library.
///
/// The variants map onto the CLI exit-code classes: everything except
/// [`Error::Verification`] is a domain/argument failure.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{op}: domain error: {msg}")]
    Domain { op: &'static str, msg: String },

    #[error("{op}: invalid argument: {msg}")]
    Argument { op: &'static str, msg: String },

    #[error("{op}: precondition violated at index {index}: {msg}")]
    Precondition {
        op: &'static str,
        index: usize,
        msg: String,
    },

    #[error("{op}: no convergence after {terms} terms (partial value {partial})")]
    Convergence {
        op: &'static str,
        terms: usize,
        partial: ExtReal,
    },

    #[error(
        "{op}: truncation saturated: central index {nu} at r = {r} reaches the guard \
         {limit} for truncation order {order}; use more coefficients"
    )]
    Saturation {
        op: &'static str,
        r: f64,
        nu: usize,
        limit: f64,
        order: usize,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("verification failed: {0}")]
    Verification(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { op, msg: msg.into() }
    }

    pub(crate) fn argument(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Argument { op, msg: msg.into() }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

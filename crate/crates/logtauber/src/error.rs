//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("domain error: {what} at x = {x}")]
    Domain { what: String, x: f64 },

    #[error("piece layout error: {0}")]
    PieceLayout(String),

    #[error("complex-valued function fed to a real-only operation")]
    CodomainMismatch,

    #[error("expression evaluated to a non-finite value at x = {x}")]
    NonFinite { x: f64 },

    #[error("argument magnitude exceeds floating-point range (log x = {log_x})")]
    Overflow { log_x: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("quadrature tolerance not met: requested {requested}, achieved {achieved}")]
    ToleranceNotMet { requested: f64, achieved: f64 },

    #[error("too many piece breakpoints in ({lo}, {hi}): exceeded cap {cap}")]
    TooManyPieces { lo: f64, hi: f64, cap: usize },

    #[error("window (x0 = {x0}, lambda = {lambda}, eps = {eps}) invalid at its horizon: worst value {worst}")]
    InvalidWindow { x0: f64, lambda: f64, eps: f64, worst: f64 },

    #[error("empty window: x^lambda exceeds the available horizon (x = {x}, lambda = {lambda})")]
    EmptyWindow { x: f64, lambda: f64 },

    #[error("chain hypothesis violated: need x < t^(1/lambda), got log x = {log_x}, log t / lambda = {log_t_over_lambda}")]
    ChainHypothesis { log_x: f64, log_t_over_lambda: f64 },

    #[error("no b1 found with |s(b1) - ell| <= eps on [x0, horizon]; contradicts the statistical-limit evidence for ell")]
    NoB1Found,

    #[error("horizon exhausted: {0}")]
    HorizonExhausted(String),

    #[error("serialization error: {0}")]
    Serialize(String),

    #[error("{0} cannot be printed as DSL text (procedural piece set)")]
    Unprintable(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

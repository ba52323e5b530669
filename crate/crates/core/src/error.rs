use alloc::string::String;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("capability error: {0}")]
    Capability(String),
    #[error("eigen-solver did not converge at t = {t}, |xi| = {xi_norm}")]
    NonConvergence { t: f64, xi_norm: f64 },
    #[error("consistency error: {what} residual {residual:e} exceeds {tol:e}")]
    Consistency {
        what: &'static str,
        residual: f64,
        tol: f64,
    },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("step size {step:e} violates the guard {limit:e}")]
    StepGuard { step: f64, limit: f64 },
    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },
    #[error("shape mismatch: {0}")]
    Shape(String),
}

pub type Result<T> = core::result::Result<T, Error>;

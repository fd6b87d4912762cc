use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A caller-side precondition (quadrature order, effect normalization, ...) is not met.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An iterative procedure did not reach its tolerance.
    #[error("no convergence after {iterations} refinements (last change {last_change:e}, tol {tol:e})")]
    Convergence {
        iterations: usize,
        last_change: f64,
        tol: f64,
    },

    /// A desk-scale size guard was exceeded.
    #[error("resource guard exceeded: {what} = {value} > {limit}")]
    Resource {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    /// A least-squares decomposition left a residual above its threshold.
    #[error("decomposition residual {residual:e} exceeds {threshold:e}")]
    Decomposition { residual: f64, threshold: f64 },

    /// A numerical self-check that should hold by construction failed.
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

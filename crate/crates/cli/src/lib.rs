//! Library side of the `wehrl` command-line tool: state-file parsing, report rendering and
//! the command implementations.

pub mod commands;
pub mod report;
pub mod state;

use std::fmt;

/// Default numerical tolerance; overridden by the `WEHRL_TOL` environment variable.
pub const DEFAULT_TOL: f64 = 1e-9;

pub const TOL_ENV: &str = "WEHRL_TOL";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(String),
    Io(String),
    Core(wehrl_core::Error),
}

impl CliError {
    /// 1 for usage, parse and I/O problems, 3 for resource guards.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(wehrl_core::Error::Resource { .. }) => 3,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<wehrl_core::Error> for CliError {
    fn from(e: wehrl_core::Error) -> Self {
        CliError::Core(e)
    }
}

/// `WEHRL_TOL` if set, else [`DEFAULT_TOL`].
pub fn default_tolerance() -> Result<f64, CliError> {
    match std::env::var(TOL_ENV) {
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
            _ => Err(CliError::Usage(format!("{TOL_ENV}={s:?} is not a positive number"))),
        },
        Err(_) => Ok(DEFAULT_TOL),
    }
}

//! Crate-wide error type.
//!
//! Physical-domain violations are never clamped or repaired; every fallible
//! operation reports what went wrong and with which value.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A physical quantity is outside its admissible domain (rho <= 0, |v| >= 1, ...).
    #[error("domain error: {what} = {value} is not admissible")]
    Domain { what: &'static str, value: f64 },

    /// A value falls outside the invertible range of a tabulated function.
    #[error("range error: {what} = {value} is outside the covered range")]
    Range { what: &'static str, value: f64 },

    /// A conserved triple does not decode to a valid primitive state.
    #[error("decode error: {what} = {value}")]
    Decode { what: &'static str, value: f64 },

    /// An iterative solve failed to converge or produced a non-finite value.
    #[error("numerical failure in {what}: {detail}")]
    Numerical { what: &'static str, detail: String },

    /// A runtime monitor (functional monotonicity, variation bound, ...) was violated.
    #[error("monitor violation at level {level}: {quantity} = {value} exceeds bound {bound}")]
    Monitor {
        level: usize,
        quantity: &'static str,
        value: f64,
        bound: f64,
    },

    /// Invalid run configuration; nothing was executed.
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::Monitor { .. } => 3,
            _ => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

//! Exact wave-curve machinery, a global Riemann solver, and the random
//! choice scheme for one-dimensional relativistic gas dynamics with the
//! constant-sound-speed pressure law p = a^2 rho.

pub mod cli;
pub mod eos;
pub mod error;
pub mod glimm;
pub mod interactions;
pub mod riemann;
pub mod states;
pub mod wavecurves;

pub use eos::EosParams;
pub use error::{Error, Result};
pub use states::{ConservedState, InvariantState, PrimitiveState};

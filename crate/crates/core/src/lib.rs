//! Calculus, quadrature and verification tools on the Heisenberg group
//! `H^N` with the Korányi gauge.

pub mod check;
mod error;

pub mod autodiff;
pub mod hcalc;
pub mod hgroup;
pub mod hquad;
pub mod capacity;
pub mod evolve;
pub mod spectrum;
pub mod witness;

pub use error::{Error, Result};
pub use hgroup::{GroupContext, HPoint};

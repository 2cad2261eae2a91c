//! Mass density wave simulation for Laguerre-Gaussian light pulses in a
//! nondispersive dielectric, with the angular momentum bookkeeping between
//! field and medium and a closed-form fiber rotation planner.

pub mod constants;
pub mod dynamics;
pub mod error;
pub mod fiber;
pub mod forces;
pub mod grid;
pub mod io;
pub mod lgfields;
pub mod observables;
pub mod reduce;
pub mod study;

pub use error::{Error, Result, Violation};

//! Hybrid qubit–qumode simulation and the inverse-iteration eigensolver built on it.
//!
//! The eigensolver applies `H^{-1}` to a qubit register by entangling it with a
//! squeezed continuous-variable mode, evolving under `exp(-i H ⊗ p)`, and
//! post-selecting the mode on a finite-squeezed position state.

pub mod error;
pub mod evolution;
pub mod experiments;
pub mod hamiltonians;
pub mod hilbert;
pub mod hybrid;
pub mod linalg;
pub mod noise;
pub mod qumode;
pub mod quipi;
pub mod special;

pub use error::{Error, Result};

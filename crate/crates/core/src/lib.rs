//! Entanglement dynamics of two two-level atoms held in separate cavities that
//! are joined by an optical fiber.
//!
//! The crate is `no_std` (it needs `alloc`). Modules:
//!
//! * [`model`]: parameters, initial states, density matrices, time grids.
//! * [`analytic`]: closed-form amplitudes, reduced state and concurrence.
//! * [`numeric`]: Hamiltonian, exact propagation, partial trace, Wootters
//!   concurrence. Used as an independent oracle for [`analytic`].
//! * [`analysis`]: series, zero-set detection, sweeps, normal modes and
//!   auxiliary physical criteria.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod analytic;
mod error;
pub mod model;
pub mod numeric;

pub use error::{Error, Result};
pub use model::{Amplitudes, AtomDensityMatrix, CouplingParams, InitialAngle, TimeGrid};

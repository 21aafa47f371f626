//! Simulation of quantum-logic state detection for a single trapped
//! molecular ion.
//!
//! A state-dependent optical-dipole force, computed from a rovibronic line
//! catalog ([`spectro`]), excites the motion of a two-ion crystal
//! ([`dynamics`]). The motional energy is read out through sideband Rabi
//! oscillations of the co-trapped atomic ion ([`thermometry`]), and
//! [`protocol`] strings these together into the molecular signal, the
//! molecule-to-atom force conversion and the error budget.

pub mod config;
pub mod cli;
pub mod constants;
pub mod dynamics;
pub mod error;
pub mod halfint;
pub mod protocol;
pub mod spectro;
pub mod thermometry;
pub mod units;

pub use error::{Error, Result};
pub use halfint::HalfInt;

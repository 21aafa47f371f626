//! Rovibronic spectroscopy of the N2+ A ← X band: line catalog, ac-Stark
//! shifts, optical-dipole-force amplitudes and off-resonant scattering.

pub mod catalog;
pub mod honl_london;
pub mod lattice;
pub mod molecular;
pub mod scattering;
pub mod stark;
pub mod state;
pub mod wigner;

pub use catalog::{build_line_catalog, build_multi_band_catalog, TransitionLine};
pub use honl_london::{honl_london, Branch, BranchKind, SpinComponent};
pub use lattice::LatticeConfig;
pub use molecular::{upper_state_decay_rate, MolecularConstants};
pub use scattering::{scattering_probability, scattering_rate};
pub use stark::{ac_stark_shift, odf_amplitude, odf_spectrum, OdfAmplitude, SpectrumPoint};
pub use state::{Electronic, RovibronicLevel, RovibronicState};
pub use wigner::wigner3j;

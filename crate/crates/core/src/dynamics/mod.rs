//! Classical axial motion of one- and two-ion crystals driven by the
//! optical-dipole force.

pub mod crystal;
pub mod drive;
pub mod simulate;

pub use crystal::{equilibrium_positions, mode_vectors, normal_modes, CrystalConfig, Ion, ModeFrequencies};
pub use drive::{odf_force_at, DriveSpec};
pub use simulate::{
    energy_to_nbar, phase_sweep, simulate_single, simulate_single_from, simulate_two, simulate_two_from,
    InitialCondition, StepControl, Trajectory,
};

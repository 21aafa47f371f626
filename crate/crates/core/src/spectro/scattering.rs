//! Off-resonant photon scattering by the lattice light.

use crate::constants::{C, EPSILON_0, HBAR};
use crate::error::{Error, Result};
use crate::spectro::catalog::TransitionLine;
use crate::spectro::lattice::LatticeConfig;
use crate::spectro::molecular::{upper_state_decay_rate, MolecularConstants};
use crate::spectro::state::RovibronicState;
use crate::spectro::stark::connected_couplings;

/// Photon scattering rate of `state` in s^-1:
/// `Γ_sc = Σ_j Γ_j ρ_jj` with the far-detuned upper-state population
/// `ρ_jj = I |<j|μ|i>|² / (2 ε0 ħ² c Δ_j²)`.
///
/// Γ_j is the total decay rate of the partner level, taken from the Einstein
/// table when it is complete and from the line's natural width otherwise.
pub fn scattering_rate(
    state: &RovibronicState,
    lattice: &LatticeConfig,
    catalog: &[TransitionLine],
    constants: &MolecularConstants,
) -> Result<f64> {
    let intensity = lattice.peak_intensity();
    let mut rate = 0.0;
    for c in connected_couplings(state, lattice, catalog)? {
        let excited = if c.sign > 0.0 { c.line.upper } else { c.line.lower };
        let gamma = upper_state_decay_rate(constants, excited.v).unwrap_or(c.line.natural_width);
        let rho = intensity * c.dipole_sq / (2.0 * EPSILON_0 * HBAR * HBAR * C * c.detuning.powi(2));
        rate += gamma * rho;
    }
    Ok(rate)
}

/// Probability of scattering at least one photon during an exposure τ.
pub fn scattering_probability(rate: f64, exposure: f64) -> Result<f64> {
    if !(rate >= 0.0) || !(exposure >= 0.0) {
        return Err(Error::Domain(format!(
            "scattering rate {rate} and exposure {exposure} must be nonnegative"
        )));
    }
    Ok(-(-rate * exposure).exp_m1())
}

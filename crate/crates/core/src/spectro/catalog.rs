//! Rovibronic line catalog for a single vibronic band.

use std::f64::consts::PI;

use crate::constants::{C, EPSILON_0, H};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::spectro::honl_london::{honl_london_omega, Branch, BranchKind, SpinComponent};
use crate::spectro::molecular::MolecularConstants;
use crate::spectro::state::RovibronicLevel;

/// One allowed A ← X line.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionLine {
    pub lower: RovibronicLevel,
    pub upper: RovibronicLevel,
    /// Transition frequency in Hz.
    pub frequency: f64,
    pub branch: Branch,
    /// Hönl-London factor, normalized as in [`crate::spectro::honl_london`].
    pub honl_london: f64,
    /// Squared reduced dipole matrix element, (C m)^2.
    pub reduced_dipole_sq: f64,
    /// Vibronic Einstein A coefficient of the band, s^-1.
    pub einstein_a: f64,
    /// Radiative decay rate of the upper level, s^-1.
    pub natural_width: f64,
}

impl TransitionLine {
    pub fn angular_frequency(&self) -> f64 {
        2.0 * PI * self.frequency
    }

    pub fn wavelength(&self) -> f64 {
        C / self.frequency
    }

    /// Spectroscopic label such as `R11(1/2)`.
    pub fn label(&self) -> String {
        format!("{}({})", self.branch, self.lower.j)
    }
}

/// Squared reduced dipole moment from line strength and band Einstein A:
/// `3 ε0 h c³ / (2 ω³) · S · A_vib`.
///
/// With the per-lower-level Hönl-London normalization used here, the branch
/// factor already contains the upper-level degeneracy 2J' + 1.
pub fn reduced_dipole_sq(angular_frequency: f64, honl_london: f64, einstein_a: f64) -> f64 {
    3.0 * EPSILON_0 * H * C.powi(3) / (2.0 * angular_frequency.powi(3)) * honl_london * einstein_a
}

/// All lines of the (v', v'') band whose lower level has N'' ≤ `n_max`.
pub fn build_line_catalog(
    constants: &MolecularConstants,
    band: (u32, u32),
    n_max: u32,
) -> Result<Vec<TransitionLine>> {
    let (v_upper, v_lower) = band;
    constants.band_ready(v_upper, v_lower)?;
    let einstein_a = constants.band_einstein_a(v_upper, v_lower)?;
    let natural_width = crate::spectro::molecular::upper_state_decay_rate(constants, v_upper)
        .unwrap_or_else(|_| {
            constants
                .einstein_a
                .iter()
                .filter(|((up, _), _)| *up == v_upper)
                .map(|(_, a)| *a)
                .sum()
        });
    let f1_omega = constants.upper_f1_omega();

    let mut lines = Vec::new();
    for n in 0..=n_max {
        let two_n = 2 * n as i32;
        let mut lower_js = vec![HalfInt::from_twice(two_n + 1)];
        if n >= 1 {
            lower_js.push(HalfInt::from_twice(two_n - 1));
        }
        for j_lower in lower_js {
            let lower = RovibronicLevel::ground(v_lower, n, j_lower)?;
            let lower_component = lower
                .ground_component()
                .ok_or_else(|| Error::Domain("X level without N".into()))?;
            let e_lower = constants.term_value(&lower)?;
            for kind in [BranchKind::P, BranchKind::Q, BranchKind::R] {
                let j_upper = j_lower + HalfInt::from_int(kind.delta_j());
                for omega in [HalfInt::HALF, HalfInt::from_twice(3)] {
                    if j_upper < omega {
                        continue;
                    }
                    let s = honl_london_omega(kind, omega, j_lower)?;
                    if s <= 0.0 {
                        continue;
                    }
                    let upper = RovibronicLevel::excited(v_upper, omega, j_upper)?;
                    let frequency = constants.term_value(&upper)? - e_lower;
                    if frequency <= 0.0 {
                        return Err(Error::Config(format!(
                            "non-positive transition frequency for {upper} <- {lower}"
                        )));
                    }
                    let upper_component = if omega == f1_omega {
                        SpinComponent::F1
                    } else {
                        SpinComponent::F2
                    };
                    let omega_rad = 2.0 * PI * frequency;
                    lines.push(TransitionLine {
                        lower,
                        upper,
                        frequency,
                        branch: Branch {
                            kind,
                            upper: upper_component,
                            lower: lower_component,
                        },
                        honl_london: s,
                        reduced_dipole_sq: reduced_dipole_sq(omega_rad, s, einstein_a),
                        einstein_a,
                        natural_width,
                    });
                }
            }
        }
    }
    Ok(lines)
}

/// Catalog spanning several bands.
pub fn build_multi_band_catalog(
    constants: &MolecularConstants,
    bands: &[(u32, u32)],
    n_max: u32,
) -> Result<Vec<TransitionLine>> {
    let mut all = Vec::new();
    for &band in bands {
        all.extend(build_line_catalog(constants, band, n_max)?);
    }
    Ok(all)
}

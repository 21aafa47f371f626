//! State-dependent ac-Stark shifts and optical-dipole-force amplitudes.

use crate::constants::{C, EPSILON_0, HBAR};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::spectro::catalog::TransitionLine;
use crate::spectro::lattice::LatticeConfig;
use crate::spectro::state::RovibronicState;
use crate::spectro::wigner::wigner3j;

/// Detunings closer than this many natural linewidths are treated as
/// singular; the perturbative shift formula needs |Δ| ≫ Γ.
pub const SINGULARITY_WIDTHS: f64 = 1e6;

/// The coupling of a state to one line of the catalog.
#[derive(Debug, Clone, Copy)]
pub struct LineCoupling<'a> {
    pub line: &'a TransitionLine,
    /// +1 when the state is the lower level of the line, -1 otherwise.
    pub sign: f64,
    /// Laser detuning ω_laser - ω_line, rad/s.
    pub detuning: f64,
    /// |<j|μ|i>|² summed over the magnetic sublevels of the partner level.
    pub dipole_sq: f64,
}

/// Polarization-weighted squared dipole between `state` and every sublevel
/// of `partner_j`:
/// `Σ_m' |μ_red|² |Σ_q (J 1 J'; -m q m') c^(q)·ε|²`.
fn projected_dipole_sq(
    j: HalfInt,
    m: HalfInt,
    partner_j: HalfInt,
    reduced_sq: f64,
    lattice: &LatticeConfig,
) -> Result<f64> {
    let comps = lattice.spherical_components();
    let mut total = 0.0;
    for m_partner in partner_j.projections() {
        let q = m - m_partner;
        if q.abs() > HalfInt::ONE {
            continue;
        }
        let w = wigner3j(j, HalfInt::ONE, partner_j, -m, q, m_partner)?;
        let amp = comps[(q.twice() / 2 + 1) as usize] * w;
        total += amp.norm_sqr();
    }
    Ok(total * reduced_sq)
}

/// Lines of the catalog touching the state's level, with their couplings.
pub fn connected_couplings<'a>(
    state: &RovibronicState,
    lattice: &LatticeConfig,
    catalog: &'a [TransitionLine],
) -> Result<Vec<LineCoupling<'a>>> {
    let omega_laser = lattice.angular_frequency();
    let mut out = Vec::new();
    for line in catalog {
        let (sign, partner) = if line.lower == state.level {
            (1.0, line.upper)
        } else if line.upper == state.level {
            (-1.0, line.lower)
        } else {
            continue;
        };
        let detuning = omega_laser - line.angular_frequency();
        if detuning.abs() < SINGULARITY_WIDTHS * line.natural_width || detuning == 0.0 {
            return Err(Error::Singularity(format!(
                "laser at {:.4} nm is {:.3e} rad/s from {} ({:.4} nm)",
                lattice.wavelength * 1e9,
                detuning,
                line.label(),
                line.wavelength() * 1e9
            )));
        }
        let dipole_sq = projected_dipole_sq(
            state.level.j,
            state.m_j,
            partner.j,
            line.reduced_dipole_sq,
            lattice,
        )?;
        out.push(LineCoupling {
            line,
            sign,
            detuning,
            dipole_sq,
        });
    }
    Ok(out)
}

/// Far-detuned ac-Stark shift of `state` in one lattice beam of peak
/// intensity I0, in joules:
/// `ΔE = I0 / (2 ε0 ħ c) Σ_j σ_j |<j|μ|i>|² / Δ_j`.
///
/// A state with no connected line has zero shift (with a warning).
pub fn ac_stark_shift(
    state: &RovibronicState,
    lattice: &LatticeConfig,
    catalog: &[TransitionLine],
) -> Result<f64> {
    let couplings = connected_couplings(state, lattice, catalog)?;
    if couplings.is_empty() {
        log::warn!("{state} has no connected lines in the catalog; shift is zero");
        return Ok(0.0);
    }
    let intensity = lattice.peak_intensity();
    let prefactor = intensity / (2.0 * EPSILON_0 * HBAR * C);
    let mut shift = 0.0;
    for c in &couplings {
        let rabi = (2.0 * intensity * c.dipole_sq / (C * EPSILON_0)).sqrt() / HBAR;
        if c.detuning.abs() < 10.0 * rabi {
            log::warn!(
                "{}: detuning {:.3e} rad/s is not large against the Rabi frequency {:.3e} rad/s",
                c.line.label(),
                c.detuning,
                rabi
            );
        }
        shift += c.sign * c.dipole_sq / c.detuning;
    }
    Ok(prefactor * shift)
}

/// Peak optical-dipole force of the lattice on a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdfAmplitude {
    /// 4 k |ΔE_ac,0|, N.
    pub force: f64,
    /// Signed single-beam shift ΔE_ac,0, J.
    pub stark_shift: f64,
}

pub fn odf_amplitude(
    state: &RovibronicState,
    lattice: &LatticeConfig,
    catalog: &[TransitionLine],
) -> Result<OdfAmplitude> {
    let shift = ac_stark_shift(state, lattice, catalog)?;
    Ok(OdfAmplitude {
        force: 4.0 * lattice.wavenumber() * shift.abs(),
        stark_shift: shift,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumPoint {
    pub wavelength: f64,
    pub amplitude: Result<OdfAmplitude>,
}

/// ODF amplitude across a wavelength grid. A point landing on a line reports
/// its singularity without aborting the sweep.
pub fn odf_spectrum(
    state: &RovibronicState,
    lattice: &LatticeConfig,
    catalog: &[TransitionLine],
    wavelengths: &[f64],
) -> Vec<SpectrumPoint> {
    wavelengths
        .iter()
        .map(|&wavelength| SpectrumPoint {
            wavelength,
            amplitude: odf_amplitude(state, &lattice.with_wavelength(wavelength), catalog),
        })
        .collect()
}

//! Expected logic-ion signal for a molecule in a given rovibronic state.

use std::f64::consts::PI;

use crate::constants::HBAR;
use crate::dynamics::crystal::{mode_vectors, normal_modes, CrystalConfig};
use crate::dynamics::drive::DriveSpec;
use crate::dynamics::simulate::{energy_to_nbar, simulate_single, simulate_two, StepControl};
use crate::error::{Error, Result};
use crate::spectro::catalog::TransitionLine;
use crate::spectro::lattice::LatticeConfig;
use crate::spectro::stark::odf_amplitude;
use crate::spectro::state::RovibronicState;
use crate::thermometry::fock::FockDistribution;
use crate::thermometry::sideband::{beta_minus_ca, lamb_dicke, SidebandCoupling, SidebandOrder};
use crate::thermometry::trace::{synthesize_trace, RabiTrace};

/// The narrow laser probing the logic ion's motional sidebands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogicLaser {
    /// Projection of the laser wavevector on the trap axis, rad/m.
    pub wavenumber: f64,
    /// Bare carrier Rabi frequency Ω0, rad/s.
    pub bare_rabi: f64,
    /// Detuning from the addressed sideband, rad/s.
    pub detuning: f64,
    pub order: SidebandOrder,
}

impl LogicLaser {
    /// Red-sideband probe at `wavelength` with a π time of `pi_time`.
    pub fn red_sideband(wavelength: f64, pi_time: f64) -> Self {
        LogicLaser {
            wavenumber: 2.0 * PI / wavelength,
            bare_rabi: PI / pi_time,
            detuning: 0.0,
            order: SidebandOrder::Red,
        }
    }

    /// Coupling to the lowest mode of `crystal` seen by the logic ion,
    /// which is ion 0.
    ///
    /// A single ion has β = 1. For two ions β is the logic ion's
    /// participation in the in-phase mode.
    pub fn coupling(&self, crystal: &CrystalConfig) -> Result<SidebandCoupling> {
        let modes = normal_modes(crystal)?;
        let mass = crystal.ions[0].mass;
        let beta = if crystal.ions.len() == 1 {
            1.0
        } else if crystal.ions[0].mass >= crystal.ions[1].mass {
            beta_minus_ca(crystal.mass_ratio()?)?
        } else {
            mode_vectors(crystal)?.0.vector[0].abs()
        };
        let c = SidebandCoupling {
            bare_rabi: self.bare_rabi,
            lamb_dicke: lamb_dicke(self.wavenumber, mass, modes.minus, beta),
            detuning: self.detuning,
            order: self.order,
        };
        c.validate()?;
        Ok(c)
    }
}

/// Tunable parts of the signal chain that the physics leaves open.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalOptions {
    /// ac-Stark shift on the logic ion from the same lattice, J.
    pub logic_ion_shift: f64,
    /// Lattice beat frequency; `None` drives the in-phase mode resonantly.
    pub beat: Option<f64>,
    pub control: StepControl,
}

impl Default for SignalOptions {
    fn default() -> Self {
        SignalOptions {
            logic_ion_shift: 0.0,
            beat: None,
            control: StepControl::default(),
        }
    }
}

/// Every intermediate of the molecular signal chain.
#[derive(Debug, Clone, PartialEq)]
pub struct MolecularSignal {
    /// Signed single-beam ac-Stark shift of the molecule, J.
    pub stark_shift: f64,
    /// ODF amplitude on the molecule, N.
    pub force: f64,
    /// Crystal energy after the pulse, J.
    pub energy: f64,
    pub nbar: f64,
    pub coupling: SidebandCoupling,
    pub trace: RabiTrace,
}

/// Energy, n̄ and sideband trace of a two-ion crystal whose molecule (ion 1)
/// has single-beam shift `molecule_shift`.
pub fn two_ion_signal(
    molecule_shift: f64,
    lattice: &LatticeConfig,
    crystal: &CrystalConfig,
    t_odf: f64,
    laser: &LogicLaser,
    times: &[f64],
    options: &SignalOptions,
) -> Result<MolecularSignal> {
    if crystal.ions.len() != 2 {
        return Err(Error::Domain("the molecular signal needs a two-ion crystal".into()));
    }
    let modes = normal_modes(crystal)?;
    let drive = DriveSpec {
        stark_shifts: vec![options.logic_ion_shift, molecule_shift],
        wavenumber: lattice.wavenumber(),
        beat: options.beat.unwrap_or(modes.minus),
        phase: lattice.phase_offset,
        duration: t_odf,
    };
    let traj = simulate_two(crystal, &drive, t_odf, &options.control)?;
    let extent = traj
        .positions
        .iter()
        .zip([-1.0, 1.0])
        .flat_map(|(xs, s)| xs.iter().map(move |x| (x - s * crystal.half_separation()).abs()))
        .fold(0.0, f64::max);
    lattice.check_excursion(extent);
    let energy = traj.final_energy().max(0.0);
    let nbar = energy_to_nbar(energy, modes.minus);
    let coupling = laser.coupling(crystal)?;
    let dist = FockDistribution::coherent(nbar)?;
    Ok(MolecularSignal {
        stark_shift: molecule_shift,
        force: drive.force_amplitude(1),
        energy,
        nbar,
        coupling,
        trace: synthesize_trace(&dist, &coupling, times),
    })
}

/// Expected logic-ion sideband signal for a molecule in `state`: ODF
/// amplitude from the line catalog, driven two-ion motion, coherent Fock
/// distribution with n̄ = E/(ħω₋), and the resulting Rabi flop.
#[allow(clippy::too_many_arguments)]
pub fn molecular_signal(
    state: &RovibronicState,
    lattice: &LatticeConfig,
    catalog: &[TransitionLine],
    crystal: &CrystalConfig,
    t_odf: f64,
    laser: &LogicLaser,
    times: &[f64],
    options: &SignalOptions,
) -> Result<MolecularSignal> {
    let odf = odf_amplitude(state, lattice, catalog)?;
    two_ion_signal(odf.stark_shift, lattice, crystal, t_odf, laser, times, options)
}

/// Energy of a single ion driven resonantly with force amplitude `force`.
pub(crate) fn single_ion_energy(
    force: f64,
    crystal: &CrystalConfig,
    wavenumber: f64,
    t_odf: f64,
    control: &StepControl,
) -> Result<f64> {
    let omega = normal_modes(crystal)?.minus;
    let drive = DriveSpec::from_forces(&[force], wavenumber, omega, t_odf)?;
    Ok(simulate_single(crystal, &drive, t_odf, control)?.final_energy())
}

/// n̄ of a single ion after the same resonant pulse.
pub(crate) fn single_ion_nbar(
    force: f64,
    crystal: &CrystalConfig,
    wavenumber: f64,
    t_odf: f64,
    control: &StepControl,
) -> Result<f64> {
    let omega = normal_modes(crystal)?.minus;
    Ok(single_ion_energy(force, crystal, wavenumber, t_odf, control)?.max(0.0) / (HBAR * omega))
}

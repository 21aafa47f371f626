//! Conversion of a molecular ODF amplitude into the single-atom force that
//! reproduces the same logic-ion signal.

use std::fmt;

use crate::constants::HBAR;
use crate::dynamics::crystal::{normal_modes, CrystalConfig};
use crate::dynamics::simulate::StepControl;
use crate::error::{Error, Result};
use crate::protocol::signal::{single_ion_energy, single_ion_nbar, two_ion_signal, LogicLaser, MolecularSignal, SignalOptions};
use crate::spectro::lattice::LatticeConfig;
use crate::thermometry::fit::{fit_nbar, FitOptions, FitReport};
use crate::thermometry::fock::FockDistribution;
use crate::thermometry::trace::{synthesize_trace, RabiTrace};

#[derive(Debug, Clone, PartialEq)]
pub struct ConversionOptions {
    pub signal: SignalOptions,
    pub fit: FitOptions,
    /// Search interval for F1 relative to F2.
    pub bracket: (f64, f64),
    /// Relative tolerance on the single-ion energy.
    pub energy_tolerance: f64,
    /// Logic-ion ac-Stark shift per unit single-beam intensity, J m²/W; when
    /// set, the required intensity is reported too.
    pub stark_per_intensity: Option<f64>,
}

impl Default for ConversionOptions {
    fn default() -> Self {
        ConversionOptions {
            signal: SignalOptions::default(),
            fit: FitOptions::default(),
            bracket: (1e-3, 1e3),
            energy_tolerance: 1e-4,
            stark_per_intensity: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConversionResult {
    /// ODF amplitude on the molecule in the two-ion crystal, N.
    pub f2: f64,
    pub two_ion: MolecularSignal,
    /// Single-ion fit of the two-ion trace.
    pub fit: FitReport,
    /// Equivalent single-ion ODF amplitude, N.
    pub f1: f64,
    /// Single-beam ac-Stark shift that produces F1, J.
    pub stark_shift: f64,
    /// Single-beam intensity that produces F1, W/m².
    pub intensity: Option<f64>,
    /// n̄ the single ion actually reaches at F1.
    pub nbar1_reached: f64,
    /// Single-ion trace at F1.
    pub single_trace: RabiTrace,
    /// RMS difference between the single-ion and two-ion traces.
    pub closure_rms: f64,
}

impl ConversionResult {
    pub fn nbar2(&self) -> f64 {
        self.two_ion.nbar
    }

    pub fn nbar1(&self) -> f64 {
        self.fit.nbar
    }
}

impl fmt::Display for ConversionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "f2_N = {:.6e}", self.f2)?;
        writeln!(f, "nbar2 = {:.6}", self.nbar2())?;
        writeln!(f, "nbar1 = {:.6}", self.nbar1())?;
        writeln!(f, "nbar1_uncertainty = {:.6}", self.fit.uncertainty)?;
        writeln!(f, "fit_residual_rms = {:.6e}", self.fit.residual_rms)?;
        writeln!(f, "f1_N = {:.6e}", self.f1)?;
        writeln!(f, "stark_shift_J = {:.6e}", self.stark_shift)?;
        if let Some(i) = self.intensity {
            writeln!(f, "intensity_W_per_m2 = {i:.6e}")?;
        }
        writeln!(f, "nbar1_reached = {:.6}", self.nbar1_reached)?;
        writeln!(f, "closure_rms = {:.6e}", self.closure_rms)
    }
}

/// The logic ion of `crystal` alone in the same trap.
pub fn logic_ion_alone(crystal: &CrystalConfig) -> Result<CrystalConfig> {
    CrystalConfig::new(crystal.omega_t, crystal.reference_mass, vec![crystal.ions[0].clone()])
}

/// Smallest force in `[lo, hi]` whose single-ion energy reaches `target`,
/// by a geometric walk from `guess` followed by bisection in log F.
fn solve_force(
    target: f64,
    guess: f64,
    lo: f64,
    hi: f64,
    tolerance: f64,
    energy: impl Fn(f64) -> Result<f64>,
) -> Result<f64> {
    let mut evaluated = Vec::new();
    let mut eval = |f: f64| -> Result<f64> {
        let e = energy(f)?;
        evaluated.push((f, e));
        Ok(e)
    };
    // walk to a bracket [a, b] with E(a) < target <= E(b)
    let (mut a, mut b);
    if eval(guess)? >= target {
        b = guess;
        a = guess / 2.0;
        while eval(a)? >= target {
            b = a;
            a /= 2.0;
            if a < lo {
                return Err(bracket_error(target, lo, hi, &evaluated));
            }
        }
    } else {
        a = guess;
        b = guess * 2.0;
        while eval(b)? < target {
            a = b;
            b *= 2.0;
            if b > hi {
                return Err(bracket_error(target, lo, hi, &evaluated));
            }
        }
    }
    for _ in 0..200 {
        let mid = (a * b).sqrt();
        let e = eval(mid)?;
        if ((e - target) / target).abs() <= tolerance {
            return Ok(mid);
        }
        if e < target {
            a = mid;
        } else {
            b = mid;
        }
    }
    Err(Error::Conversion(format!(
        "bisection did not reach {tolerance:e} relative energy between {a:.6e} N and {b:.6e} N"
    )))
}

fn bracket_error(target: f64, lo: f64, hi: f64, evaluated: &[(f64, f64)]) -> Error {
    let tried: Vec<String> = evaluated
        .iter()
        .map(|(f, e)| format!("F = {f:.3e} N -> E = {e:.3e} J"))
        .collect();
    Error::Conversion(format!(
        "no force in [{lo:.3e}, {hi:.3e}] N reaches E1 = {target:.3e} J; tried {}",
        tried.join("; ")
    ))
}

/// Runs the two-ion signal chain at molecular force `f2`, fits the result
/// with the single-ion model, and solves for the single-ion force `f1`
/// reaching the fitted energy after `t_odf`.
pub fn convert_odf(
    f2: f64,
    lattice: &LatticeConfig,
    crystal: &CrystalConfig,
    t_odf: f64,
    laser: &LogicLaser,
    times: &[f64],
    options: &ConversionOptions,
) -> Result<ConversionResult> {
    if !(f2 >= 0.0) {
        return Err(Error::Domain(format!("molecular force {f2} N is negative")));
    }
    let k = lattice.wavenumber();
    let two_ion = two_ion_signal(f2 / (4.0 * k), lattice, crystal, t_odf, laser, times, &options.signal)?;

    let single = logic_ion_alone(crystal)?;
    let omega_t = normal_modes(&single)?.minus;
    let single_coupling = laser.coupling(&single)?;
    let fit_options = FitOptions {
        nbar_max: options.fit.nbar_max.max(3.0 * two_ion.nbar + 10.0),
        ..options.fit
    };
    let fit = fit_nbar(&two_ion.trace, &single_coupling, &fit_options)?;

    let target = fit.nbar * HBAR * omega_t;
    let control: StepControl = options.signal.control;
    let f1 = if target <= 0.0 || f2 == 0.0 {
        0.0
    } else {
        let fast = control.unverified();
        solve_force(
            target,
            f2,
            options.bracket.0 * f2,
            options.bracket.1 * f2,
            options.energy_tolerance,
            |f| single_ion_energy(f, &single, k, t_odf, &fast),
        )?
    };

    let nbar1_reached = single_ion_nbar(f1, &single, k, t_odf, &control)?;
    let single_trace = synthesize_trace(&FockDistribution::coherent(nbar1_reached)?, &single_coupling, times);
    let closure_rms = rms_difference(&single_trace, &two_ion.trace)?;
    let stark_shift = f1 / (4.0 * k);
    Ok(ConversionResult {
        f2,
        two_ion,
        fit,
        f1,
        stark_shift,
        intensity: options.stark_per_intensity.map(|c| stark_shift / c),
        nbar1_reached,
        single_trace,
        closure_rms,
    })
}

/// Conversion at each force of `f2s`.
pub fn conversion_curve(
    f2s: &[f64],
    lattice: &LatticeConfig,
    crystal: &CrystalConfig,
    t_odf: f64,
    laser: &LogicLaser,
    times: &[f64],
    options: &ConversionOptions,
) -> Result<Vec<ConversionResult>> {
    f2s.iter()
        .map(|&f2| convert_odf(f2, lattice, crystal, t_odf, laser, times, options))
        .collect()
}

pub(crate) fn rms_difference(a: &RabiTrace, b: &RabiTrace) -> Result<f64> {
    if a.times != b.times {
        return Err(Error::Domain("traces are on different time grids".into()));
    }
    let n = a.len().max(1) as f64;
    Ok((a.excited.iter().zip(&b.excited).map(|(x, y)| (x - y).powi(2)).sum::<f64>() / n).sqrt())
}

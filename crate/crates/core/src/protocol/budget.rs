//! Shot and lifetime budget of repeated state detection on one molecule.

use std::fmt;

use crate::error::{Error, Result};
use crate::spectro::scattering::scattering_probability;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BudgetInputs {
    /// Chemical lifetime of the molecule in the trap, s.
    pub chemical_lifetime: f64,
    /// Duration of one experimental cycle, s.
    pub cycle_time: f64,
    /// Probability of scattering a lattice photon during one ODF pulse.
    pub per_pulse_scatter: f64,
    /// Required separation of the two hypotheses, in standard errors.
    pub target_sigma: f64,
    /// Single-shot separation `|p_a - p_b| / √(p_a(1-p_a) + p_b(1-p_b))`.
    pub per_shot_separation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// The molecule reacts away before a photon is likely to be scattered.
    ChemistryLimited,
    /// A scattered photon is expected within the chemical lifetime.
    ScatterLimited,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::ChemistryLimited => "chemistry-limited",
            Regime::ScatterLimited => "scatter-limited",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BudgetReport {
    pub chemical_lifetime: f64,
    pub cycle_time: f64,
    /// Cycles within one chemical lifetime.
    pub cycles: f64,
    pub per_pulse_scatter: f64,
    /// Expected pulses before the first scattered photon; infinite without
    /// scattering.
    pub pulses_before_scatter: f64,
    /// Expected scattering events within one chemical lifetime.
    pub scatters_per_lifetime: f64,
    /// Shots needed to separate the hypotheses by the target.
    pub shots_needed: f64,
    pub regime: Regime,
}

impl fmt::Display for BudgetReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "chemical_lifetime_s = {}", self.chemical_lifetime)?;
        writeln!(f, "cycle_time_s = {}", self.cycle_time)?;
        writeln!(f, "cycles_per_lifetime = {:.6}", self.cycles)?;
        writeln!(f, "per_pulse_scatter_probability = {:.6e}", self.per_pulse_scatter)?;
        if self.pulses_before_scatter.is_finite() {
            writeln!(f, "pulses_before_scatter = {:.6e}", self.pulses_before_scatter)?;
        } else {
            writeln!(f, "pulses_before_scatter = unlimited")?;
        }
        writeln!(f, "scatters_per_lifetime = {:.6e}", self.scatters_per_lifetime)?;
        writeln!(f, "shots_needed = {}", self.shots_needed)?;
        writeln!(f, "regime = {}", self.regime)
    }
}

/// Scattering probability of one pulse of length `pulse` at rate `rate`.
pub fn per_pulse_scatter(rate: f64, pulse: f64) -> Result<f64> {
    scattering_probability(rate, pulse)
}

pub fn shot_budget(inputs: &BudgetInputs) -> Result<BudgetReport> {
    let BudgetInputs {
        chemical_lifetime,
        cycle_time,
        per_pulse_scatter,
        target_sigma,
        per_shot_separation,
    } = *inputs;
    if !(cycle_time > 0.0) {
        return Err(Error::Domain(format!("cycle time {cycle_time} s must be positive")));
    }
    if !(chemical_lifetime >= 0.0) {
        return Err(Error::Domain("chemical lifetime must be nonnegative".into()));
    }
    if !(0.0..=1.0).contains(&per_pulse_scatter) {
        return Err(Error::Domain(format!(
            "scatter probability {per_pulse_scatter} outside [0, 1]"
        )));
    }
    if !(target_sigma >= 0.0) || !(per_shot_separation > 0.0) {
        return Err(Error::Domain(
            "target separation must be nonnegative and per-shot separation positive".into(),
        ));
    }
    let cycles = chemical_lifetime / cycle_time;
    let pulses_before_scatter = if per_pulse_scatter > 0.0 {
        1.0 / per_pulse_scatter
    } else {
        f64::INFINITY
    };
    let scatters_per_lifetime = if per_pulse_scatter > 0.0 { cycles * per_pulse_scatter } else { 0.0 };
    let regime = if scatters_per_lifetime < 1.0 {
        Regime::ChemistryLimited
    } else {
        Regime::ScatterLimited
    };
    Ok(BudgetReport {
        chemical_lifetime,
        cycle_time,
        cycles,
        per_pulse_scatter,
        pulses_before_scatter,
        scatters_per_lifetime,
        shots_needed: (target_sigma / per_shot_separation).powi(2).ceil(),
        regime,
    })
}

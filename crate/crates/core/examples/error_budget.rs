//! Measurements per chemical lifetime against photon scattering.

use ionlogic::protocol::{per_pulse_scatter, shot_budget, BudgetInputs};

fn main() -> ionlogic::Result<()> {
    for (lifetime, rate) in [(300.0, 0.5e-3), (f64::INFINITY, 0.5e-3), (300.0, 0.0)] {
        let report = shot_budget(&BudgetInputs {
            chemical_lifetime: lifetime,
            cycle_time: 20e-3,
            per_pulse_scatter: per_pulse_scatter(rate, 0.75e-3)?,
            target_sigma: 5.0,
            per_shot_separation: 0.5,
        })?;
        println!("lifetime {lifetime} s, scatter rate {rate} s^-1\n{report}");
    }
    Ok(())
}

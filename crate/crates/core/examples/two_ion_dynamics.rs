//! Normal modes of a Ca+ / N2+ crystal and its resonant excitation by the ODF.

use std::f64::consts::PI;

use ionlogic::dynamics::{mode_vectors, normal_modes, simulate_two, CrystalConfig, DriveSpec, StepControl};
use ionlogic::dynamics::simulate::energy_to_nbar;

fn main() -> ionlogic::Result<()> {
    let crystal = CrystalConfig::calcium_nitrogen(2.0 * PI * 641.15e3)?;
    let modes = normal_modes(&crystal)?;
    let (ip, op) = mode_vectors(&crystal)?;
    println!("in-phase     {:.2} kHz, vector {:?}", modes.minus / (2e3 * PI), ip.vector);
    println!("out-of-phase {:.2} kHz, vector {:?}", modes.plus.unwrap() / (2e3 * PI), op.vector);

    let k = 2.0 * PI / 786.5e-9;
    let t_odf = 0.75e-3;
    let drive = DriveSpec::from_forces(&[0.0, 25e-24], k, modes.minus, t_odf)?;
    let traj = simulate_two(&crystal, &drive, t_odf, &StepControl::default())?;
    let e = traj.final_energy();
    println!("25 yN on N2+ for 0.75 ms: E = {e:.4e} J, nbar = {:.3}", energy_to_nbar(e, modes.minus));

    let mut csv = Vec::new();
    traj.write_csv(&mut csv)?;
    println!("trajectory: {} samples, {} bytes of csv", traj.len(), csv.len());
    Ok(())
}

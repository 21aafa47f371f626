//! Single-ion force that reproduces the two-ion signal of a molecular force.

use std::f64::consts::PI;

use ionlogic::dynamics::CrystalConfig;
use ionlogic::protocol::{convert_odf, ConversionOptions, LogicLaser};
use ionlogic::spectro::LatticeConfig;
use ionlogic::thermometry::linspace;

fn main() -> ionlogic::Result<()> {
    let lattice = LatticeConfig::new(15e-3, 25e-6, 786.5e-9)?;
    let crystal = CrystalConfig::calcium_nitrogen(2.0 * PI * 641.15e3)?;
    let laser = LogicLaser::red_sideband(729e-9, 7e-6);
    let times = linspace(0.0, 200e-6, 101);
    let options = ConversionOptions::default();

    println!("{:>8} {:>8} {:>8} {:>8} {:>10}", "F2/yN", "F1/yN", "nbar2", "nbar1", "closure");
    for f2 in [10e-24, 30e-24] {
        let r = convert_odf(f2, &lattice, &crystal, 0.75e-3, &laser, &times, &options)?;
        println!(
            "{:>8.2} {:>8.2} {:>8.3} {:>8.3} {:>10.3e}",
            r.f2 * 1e24,
            r.f1 * 1e24,
            r.nbar2(),
            r.nbar1(),
            r.closure_rms
        );
    }
    Ok(())
}

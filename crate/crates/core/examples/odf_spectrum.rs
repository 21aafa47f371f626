//! ODF amplitude of the rotational ground state across the R11(1/2) line.

use ionlogic::spectro::{build_multi_band_catalog, odf_spectrum, scattering_rate, LatticeConfig, MolecularConstants, RovibronicState};
use ionlogic::thermometry::linspace;
use ionlogic::HalfInt;

fn main() -> ionlogic::Result<()> {
    let constants = MolecularConstants::builtin();
    let catalog = build_multi_band_catalog(&constants, &[(2, 0), (3, 1)], 8)?;
    let lattice = LatticeConfig::new(15e-3, 25e-6, 786.5e-9)?;
    let state = RovibronicState::ground(0, 0, HalfInt::HALF, -HalfInt::HALF)?;

    let grid = linspace(786.0e-9, 789.0e-9, 31);
    println!("{:>10} {:>12} {:>14}", "lambda/nm", "F/yN", "scatter/s^-1");
    for point in odf_spectrum(&state, &lattice, &catalog, &grid) {
        let scatter = scattering_rate(&state, &lattice.with_wavelength(point.wavelength), &catalog, &constants);
        match (point.amplitude, scatter) {
            (Ok(a), Ok(s)) => println!("{:>10.3} {:>12.3} {:>14.3e}", point.wavelength * 1e9, a.force * 1e24, s),
            (Err(e), _) | (_, Err(e)) => println!("{:>10.3}  {e}", point.wavelength * 1e9),
        }
    }
    Ok(())
}

//! Expected logic-ion signal for four molecular states and their
//! separability at 400 shots.

use std::f64::consts::PI;

use ionlogic::dynamics::CrystalConfig;
use ionlogic::protocol::{distinguishability, molecular_signal, LogicLaser, SignalOptions};
use ionlogic::spectro::{build_multi_band_catalog, LatticeConfig, MolecularConstants, RovibronicState};
use ionlogic::thermometry::linspace;
use ionlogic::HalfInt;

fn main() -> ionlogic::Result<()> {
    let h = HalfInt::from_twice;
    let constants = MolecularConstants::builtin();
    let catalog = build_multi_band_catalog(&constants, &[(2, 0), (3, 1)], 8)?;
    let lattice = LatticeConfig::new(15e-3, 25e-6, 786.5e-9)?;
    let crystal = CrystalConfig::calcium_nitrogen(2.0 * PI * 641.15e3)?;
    let laser = LogicLaser::red_sideband(729e-9, 7e-6);
    let times = linspace(0.0, 200e-6, 201);

    let states = [(0, 0, 1), (0, 1, 3), (0, 2, 5), (1, 2, 5)];
    let mut signals = Vec::new();
    for (v, n, twice_j) in states {
        let state = RovibronicState::ground(v, n, h(twice_j), h(-1))?;
        let s = molecular_signal(&state, &lattice, &catalog, &crystal, 0.75e-3, &laser, &times, &SignalOptions::default())?;
        println!("{state}: F = {:6.2} yN, nbar = {:.3}", s.force * 1e24, s.nbar);
        signals.push(s);
    }
    for i in 0..signals.len() {
        for j in i + 1..signals.len() {
            let d = distinguishability(&signals[i].trace, &signals[j].trace, 400)?;
            println!("states {i} vs {j}: {:5.1} sigma at {:.0} us", d.sigma, d.best_time * 1e6);
        }
    }
    Ok(())
}

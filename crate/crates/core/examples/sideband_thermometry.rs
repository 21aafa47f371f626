//! Red-sideband flops of coherent states, shot noise, and the n̄ fit.

use std::f64::consts::PI;

use ionlogic::thermometry::{add_binomial_noise, fit_nbar, linspace, synthesize_trace, FitOptions, FockDistribution, SidebandCoupling, SidebandOrder};

fn main() -> ionlogic::Result<()> {
    let coupling = SidebandCoupling::new(PI / 7e-6, 0.0954, SidebandOrder::Red)?;
    let times = linspace(0.0, 200e-6, 101);
    for (i, nbar) in [0.1, 1.0, 5.0, 20.0].into_iter().enumerate() {
        let clean = synthesize_trace(&FockDistribution::coherent(nbar)?, &coupling, &times);
        let noisy = add_binomial_noise(&clean, 400, 17 + i as u64)?;
        let fit = fit_nbar(&noisy, &coupling, &FitOptions::default())?;
        println!("true nbar {nbar:>5.1}  fitted {:.3} ± {:.3}", fit.nbar, fit.uncertainty);
    }
    Ok(())
}

//! Logic-ion background and the separability of two traces.

use crate::error::{Error, Result};
use crate::thermometry::fock::FockDistribution;
use crate::thermometry::sideband::{SidebandCoupling, SidebandOrder};
use crate::thermometry::trace::{synthesize_trace, RabiTrace};

/// Blue-sideband trace of a logic ion shelved in the metastable level,
/// left with a residual coherent excitation `residual_nbar` by the lattice.
///
/// With no residual force this is the bare first blue sideband out of the
/// motional ground state.
pub fn background_model(residual_nbar: f64, coupling: &SidebandCoupling, times: &[f64]) -> Result<RabiTrace> {
    if !(residual_nbar >= 0.0) {
        return Err(Error::Domain(format!("residual n̄ {residual_nbar} is negative")));
    }
    let blue = coupling.with_order(SidebandOrder::Blue);
    blue.validate()?;
    Ok(synthesize_trace(&FockDistribution::coherent(residual_nbar)?, &blue, times))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distinguishability {
    /// Largest separation in units of the combined binomial error.
    pub sigma: f64,
    /// Probe time at which it occurs, s.
    pub best_time: f64,
}

/// Maximum over the shared time grid of `|P_a - P_b| / √(σ_a² + σ_b²)`,
/// with binomial errors for `shots` measurements per point. Probabilities
/// are Laplace-smoothed, `(pN + 1)/(N + 2)`, so error bars never vanish.
pub fn distinguishability(a: &RabiTrace, b: &RabiTrace, shots: u32) -> Result<Distinguishability> {
    if a.times.len() != b.times.len()
        || a.times.iter().zip(&b.times).any(|(x, y)| (x - y).abs() > 1e-12 * x.abs().max(1e-9))
    {
        return Err(Error::Domain("traces are on different time grids".into()));
    }
    if shots == 0 {
        return Err(Error::Domain("distinguishability needs a positive shot count".into()));
    }
    let n = shots as f64;
    let var = |p: f64| {
        let q = (p * n + 1.0) / (n + 2.0);
        q * (1.0 - q) / n
    };
    let mut best = Distinguishability {
        sigma: 0.0,
        best_time: a.times.first().copied().unwrap_or(0.0),
    };
    for i in 0..a.len() {
        let (pa, pb) = (a.excited[i], b.excited[i]);
        let s = (pa - pb).abs() / (var(pa) + var(pb)).sqrt();
        if s > best.sigma {
            best = Distinguishability {
                sigma: s,
                best_time: a.times[i],
            };
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermometry::trace::linspace;
    use std::f64::consts::PI;

    fn coupling() -> SidebandCoupling {
        SidebandCoupling::new(PI / 7e-6, 0.0954, SidebandOrder::Red).unwrap()
    }

    #[test]
    fn no_residual_gives_bare_blue_flop() {
        let times = linspace(0.0, 200e-6, 41);
        let tr = background_model(0.0, &coupling(), &times).unwrap();
        let w = coupling().with_order(SidebandOrder::Blue).rabi_frequency(0).unwrap();
        for (t, p) in times.iter().zip(&tr.excited) {
            assert!((p - (0.5 * w * t).sin().powi(2)).abs() < 1e-14);
        }
        assert!(background_model(-1.0, &coupling(), &times).is_err());
    }

    #[test]
    fn symmetric_and_zero_on_identity() {
        let times = linspace(0.0, 100e-6, 21);
        let a = synthesize_trace(&FockDistribution::coherent(2.0).unwrap(), &coupling(), &times);
        let b = synthesize_trace(&FockDistribution::coherent(6.0).unwrap(), &coupling(), &times);
        assert_eq!(distinguishability(&a, &a, 400).unwrap().sigma, 0.0);
        let ab = distinguishability(&a, &b, 400).unwrap();
        let ba = distinguishability(&b, &a, 400).unwrap();
        assert_eq!(ab, ba);
        assert!(ab.sigma > 5.0);
        let c = synthesize_trace(&FockDistribution::coherent(2.0).unwrap(), &coupling(), &times[..20]);
        assert!(distinguishability(&a, &c, 400).is_err());
    }
}

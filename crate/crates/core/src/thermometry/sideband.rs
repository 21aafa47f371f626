//! Sideband Rabi frequencies and Lamb-Dicke factors.

use crate::constants::HBAR;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SidebandOrder {
    Red,
    Carrier,
    Blue,
}

impl std::str::FromStr for SidebandOrder {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "red" => Ok(SidebandOrder::Red),
            "carrier" => Ok(SidebandOrder::Carrier),
            "blue" => Ok(SidebandOrder::Blue),
            _ => Err(Error::Config(format!(
                "sideband order '{s}' is not red, carrier or blue"
            ))),
        }
    }
}

/// Logic-laser coupling on one motional sideband.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SidebandCoupling {
    /// Bare carrier Rabi frequency Ω0, rad/s.
    pub bare_rabi: f64,
    pub lamb_dicke: f64,
    /// Laser detuning from the sideband, rad/s.
    pub detuning: f64,
    pub order: SidebandOrder,
}

impl SidebandCoupling {
    pub fn new(bare_rabi: f64, lamb_dicke: f64, order: SidebandOrder) -> Result<Self> {
        let c = SidebandCoupling {
            bare_rabi,
            lamb_dicke,
            detuning: 0.0,
            order,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.bare_rabi > 0.0) {
            return Err(Error::Domain(format!(
                "bare Rabi frequency {} rad/s must be positive",
                self.bare_rabi
            )));
        }
        if !(self.lamb_dicke > 0.0) || !self.detuning.is_finite() {
            return Err(Error::Domain(format!(
                "Lamb-Dicke parameter {} must be positive",
                self.lamb_dicke
            )));
        }
        if self.lamb_dicke >= 1.0 {
            log::warn!("Lamb-Dicke parameter {} is outside the weak-coupling regime", self.lamb_dicke);
        }
        Ok(())
    }

    pub fn with_order(self, order: SidebandOrder) -> Self {
        SidebandCoupling { order, ..self }
    }

    /// Rabi frequency out of |n> on this sideband, `None` where no partner
    /// state exists (red sideband from n = 0).
    pub fn rabi_frequency(&self, n: usize) -> Option<f64> {
        let eta = self.lamb_dicke;
        let x = eta * eta;
        let debye_waller = self.bare_rabi * (-0.5 * x).exp();
        match self.order {
            SidebandOrder::Carrier => Some(debye_waller * laguerre(n, 0.0, x)),
            SidebandOrder::Red => {
                if n == 0 {
                    None
                } else {
                    Some(debye_waller * eta * laguerre(n - 1, 1.0, x) / (n as f64).sqrt())
                }
            }
            SidebandOrder::Blue => {
                Some(debye_waller * eta * laguerre(n, 1.0, x) / ((n + 1) as f64).sqrt())
            }
        }
    }
}

impl SidebandCoupling {
    /// Rabi frequencies out of |0>..=|n_max>.
    pub fn rabi_frequencies(&self, n_max: usize) -> Vec<Option<f64>> {
        (0..=n_max).map(|n| self.rabi_frequency(n)).collect()
    }
}

/// Generalized Laguerre polynomial `L^α_n(x)` by upward recurrence.
pub fn laguerre(n: usize, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Red-sideband Rabi frequency `Ω_{n,n-1} = Ω0 e^(-η²/2) η L¹_{n-1}(η²) / √n`.
pub fn rsb_rabi_frequency(n: usize, coupling: &SidebandCoupling) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("the red sideband has no partner below n = 0".into()));
    }
    let red = coupling.with_order(SidebandOrder::Red);
    Ok(red.rabi_frequency(n).expect("n >= 1"))
}

/// Lamb-Dicke parameter `η = k β √(ħ / (2 m ω))` for wavenumber `k`, ion mass
/// `mass`, mode frequency `omega` and mode participation `beta`.
pub fn lamb_dicke(k: f64, mass: f64, omega: f64, beta: f64) -> f64 {
    k * beta * (HBAR / (2.0 * mass * omega)).sqrt()
}

/// Participation of the heavier ion in the in-phase mode of a two-ion
/// crystal with mass ratio μ = m_heavy / m_light ≥ 1.
pub fn beta_minus_ca(mu: f64) -> Result<f64> {
    if !(mu >= 1.0) {
        return Err(Error::Domain(format!("mass ratio {mu} must be at least 1")));
    }
    let s = (1.0 + mu * mu - mu).sqrt();
    Ok((mu / 2.0).sqrt() / (s * (s + 1.0 - mu)).sqrt())
}

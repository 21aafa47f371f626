//! Ion crystal geometry: trap stiffness, equilibrium positions and axial
//! normal modes.

use std::f64::consts::PI;

use crate::constants::{coulomb_constant, AMU};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Ion {
    pub label: String,
    /// Mass, kg.
    pub mass: f64,
    /// Charge in units of e.
    pub charge: i32,
}

impl Ion {
    pub fn new(label: &str, mass: f64) -> Self {
        Ion {
            label: label.to_string(),
            mass,
            charge: 1,
        }
    }

    /// Ion of `mass_u` atomic mass units.
    pub fn with_mass_u(label: &str, mass_u: f64) -> Self {
        Ion::new(label, mass_u * AMU)
    }
}

/// A linear crystal of one or two singly charged ions in a common harmonic
/// axial potential.
///
/// The stiffness `k_t = m_ref ω_t²` is fixed by the measured frequency of a
/// single reference ion and is shared by every ion in the trap.
#[derive(Debug, Clone, PartialEq)]
pub struct CrystalConfig {
    /// Single-ion axial angular frequency of the reference ion, rad/s.
    pub omega_t: f64,
    /// Mass of the reference ion, kg.
    pub reference_mass: f64,
    /// Ions ordered along the axis: index 0 sits at -x0, index 1 at +x0.
    pub ions: Vec<Ion>,
}

/// In-phase and out-of-phase axial mode frequencies, rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeFrequencies {
    pub minus: f64,
    /// Absent for a single ion.
    pub plus: Option<f64>,
}

impl CrystalConfig {
    pub fn new(omega_t: f64, reference_mass: f64, ions: Vec<Ion>) -> Result<Self> {
        let c = CrystalConfig {
            omega_t,
            reference_mass,
            ions,
        };
        c.validate()?;
        Ok(c)
    }

    /// Ca⁺ alone, the reference ion, with axial frequency `omega_t`.
    pub fn single_calcium(omega_t: f64) -> Result<Self> {
        let ca = Ion::with_mass_u("Ca+", 40.0);
        CrystalConfig::new(omega_t, ca.mass, vec![ca])
    }

    /// Ca⁺ (at -x0) and N2⁺ (at +x0) referenced to the Ca⁺ frequency.
    pub fn calcium_nitrogen(omega_t: f64) -> Result<Self> {
        let ca = Ion::with_mass_u("Ca+", 40.0);
        let n2 = Ion::with_mass_u("N2+", 28.0);
        CrystalConfig::new(omega_t, ca.mass, vec![ca, n2])
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_t > 0.0) || !(self.reference_mass > 0.0) {
            return Err(Error::Domain(
                "trap frequency and reference mass must be positive".into(),
            ));
        }
        if self.ions.is_empty() || self.ions.len() > 2 {
            return Err(Error::Domain(format!(
                "crystal must hold one or two ions, got {}",
                self.ions.len()
            )));
        }
        for ion in &self.ions {
            if !(ion.mass > 0.0) {
                return Err(Error::Domain(format!("ion {} has non-positive mass", ion.label)));
            }
            if ion.charge != 1 {
                return Err(Error::Domain(format!(
                    "ion {} has charge {}; only singly charged ions are modeled",
                    ion.label, ion.charge
                )));
            }
        }
        Ok(())
    }

    /// Axial spring constant k_t, N/m.
    pub fn stiffness(&self) -> f64 {
        self.reference_mass * self.omega_t * self.omega_t
    }

    /// Single-ion frequency of ion `i` in the shared potential.
    pub fn single_ion_frequency(&self, i: usize) -> f64 {
        (self.stiffness() / self.ions[i].mass).sqrt()
    }

    /// Heavy-to-light mass ratio μ ≥ 1 of a two-ion crystal.
    pub fn mass_ratio(&self) -> Result<f64> {
        if self.ions.len() != 2 {
            return Err(Error::Domain("mass ratio needs two ions".into()));
        }
        let (a, b) = (self.ions[0].mass, self.ions[1].mass);
        Ok(a.max(b) / a.min(b))
    }

    /// Half the equilibrium separation, x0 = (e² / (16 π ε0 k_t))^(1/3).
    pub fn half_separation(&self) -> f64 {
        (coulomb_constant() / (4.0 * self.stiffness())).cbrt()
    }

    /// Potential energy at the two-ion equilibrium, 3 k_t x0².
    pub fn ground_energy(&self) -> f64 {
        let x0 = self.half_separation();
        3.0 * self.stiffness() * x0 * x0
    }
}

/// Equilibrium positions (-x0, +x0) of a two-ion crystal.
pub fn equilibrium_positions(crystal: &CrystalConfig) -> Result<(f64, f64)> {
    if crystal.ions.len() != 2 {
        return Err(Error::Domain(
            "equilibrium positions need a two-ion crystal".into(),
        ));
    }
    let x0 = crystal.half_separation();
    Ok((-x0, x0))
}

/// Axial mode frequencies.
///
/// With m1 the lighter ion and μ = m2/m1,
/// `ω±² = (k_t/m1)(1 + 1/μ ± √(1 + 1/μ² - 1/μ))`. A single ion has only
/// `√(k_t/m)`.
pub fn normal_modes(crystal: &CrystalConfig) -> Result<ModeFrequencies> {
    crystal.validate()?;
    let k = crystal.stiffness();
    if crystal.ions.len() == 1 {
        return Ok(ModeFrequencies {
            minus: crystal.single_ion_frequency(0),
            plus: None,
        });
    }
    let mu = crystal.mass_ratio()?;
    let m1 = crystal.ions[0].mass.min(crystal.ions[1].mass);
    let root = (1.0 + 1.0 / (mu * mu) - 1.0 / mu).sqrt();
    let base = 1.0 + 1.0 / mu;
    Ok(ModeFrequencies {
        minus: (k / m1 * (base - root)).sqrt(),
        plus: Some((k / m1 * (base + root)).sqrt()),
    })
}

/// A normal mode in mass-weighted coordinates `q_i = √m_i (x_i - x_i,eq)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalMode {
    /// Angular frequency, rad/s.
    pub omega: f64,
    /// Unit eigenvector of the mass-weighted Hessian, indexed like the ions.
    pub vector: [f64; 2],
}

/// Both axial modes of a two-ion crystal, (in-phase, out-of-phase), from the
/// linearized equations of motion. The Hessian at equilibrium is
/// `k_t [[2, -1], [-1, 2]]`.
pub fn mode_vectors(crystal: &CrystalConfig) -> Result<(NormalMode, NormalMode)> {
    if crystal.ions.len() != 2 {
        return Err(Error::Domain("mode vectors need a two-ion crystal".into()));
    }
    let k = crystal.stiffness();
    let (m0, m1) = (crystal.ions[0].mass, crystal.ions[1].mass);
    let a = 2.0 * k / m0;
    let d = 2.0 * k / m1;
    let b = -k / (m0 * m1).sqrt();
    let mean = 0.5 * (a + d);
    let radius = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    let mode = |lambda: f64| {
        let (u, w) = (b, lambda - a);
        let n = (u * u + w * w).sqrt();
        let mut v = [u / n, w / n];
        if v[0] + v[1] < 0.0 || (v[0] + v[1] == 0.0 && v[0] < 0.0) {
            v = [-v[0], -v[1]];
        }
        NormalMode {
            omega: lambda.sqrt(),
            vector: v,
        }
    };
    Ok((mode(mean - radius), mode(mean + radius)))
}

/// Cyclic frequency in Hz of an angular frequency.
pub fn to_hz(omega: f64) -> f64 {
    omega / (2.0 * PI)
}

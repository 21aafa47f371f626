//! The two-beam optical lattice producing the optical-dipole force.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::constants::C;
use crate::error::{Error, Result};

pub type Polarization = [Complex64; 3];

/// Linear polarization along z, i.e. π light for a z quantization axis.
pub fn pi_polarization() -> Polarization {
    [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]
}

/// Normalized spherical basis vectors c^(q) for q = -1, 0, +1.
pub fn spherical_basis(q: i32) -> Polarization {
    let s = 1.0 / 2f64.sqrt();
    let zero = Complex64::new(0.0, 0.0);
    match q {
        1 => [Complex64::new(-s, 0.0), Complex64::new(0.0, s), zero],
        0 => [zero, zero, Complex64::new(1.0, 0.0)],
        -1 => [Complex64::new(s, 0.0), Complex64::new(0.0, s), zero],
        _ => panic!("spherical index q = {q} outside -1..=1"),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeConfig {
    /// Power of one beam, W.
    pub power: f64,
    /// Beam waist, m.
    pub waist: f64,
    /// Laser wavelength, m.
    pub wavelength: f64,
    pub polarization: Polarization,
    /// Frequency difference of the two beams, rad/s.
    pub beat_frequency: f64,
    /// Phase difference of the two beams, rad.
    pub phase_offset: f64,
    pub quantization_axis: [f64; 3],
}

impl LatticeConfig {
    /// π-polarized lattice along a z quantization axis.
    pub fn new(power: f64, waist: f64, wavelength: f64) -> Result<Self> {
        let lattice = LatticeConfig {
            power,
            waist,
            wavelength,
            polarization: pi_polarization(),
            beat_frequency: 0.0,
            phase_offset: 0.0,
            quantization_axis: [0.0, 0.0, 1.0],
        };
        lattice.validate()?;
        Ok(lattice)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.power >= 0.0) {
            return Err(Error::Domain(format!("beam power {} W is negative", self.power)));
        }
        if !(self.waist > 0.0) || !(self.wavelength > 0.0) {
            return Err(Error::Domain("waist and wavelength must be positive".into()));
        }
        let norm: f64 = self.polarization.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!("polarization norm {norm} is not 1")));
        }
        let axis: f64 = self.quantization_axis.iter().map(|a| a * a).sum::<f64>().sqrt();
        if (axis - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!("quantization axis norm {axis} is not 1")));
        }
        Ok(())
    }

    pub fn with_wavelength(&self, wavelength: f64) -> Self {
        LatticeConfig {
            wavelength,
            ..self.clone()
        }
    }

    /// Peak intensity of a single Gaussian beam, 2P / (π w0²).
    pub fn peak_intensity(&self) -> f64 {
        2.0 * self.power / (PI * self.waist * self.waist)
    }

    /// Laser wavenumber k = 2π/λ.
    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    pub fn angular_frequency(&self) -> f64 {
        2.0 * PI * C / self.wavelength
    }

    pub fn rayleigh_range(&self) -> f64 {
        PI * self.waist * self.waist / self.wavelength
    }

    /// Warns when an ion excursion is not negligible against the Rayleigh
    /// range, where the plane-wave picture breaks down. Returns true if fine.
    pub fn check_excursion(&self, excursion: f64) -> bool {
        let ok = excursion.abs() * 100.0 < self.rayleigh_range();
        if !ok {
            log::warn!(
                "ion excursion {excursion:.3e} m is not small against the Rayleigh range {:.3e} m",
                self.rayleigh_range()
            );
        }
        ok
    }

    /// Polarization components `c^(q) · ε` in the frame whose z axis is the
    /// quantization axis, indexed by q + 1.
    pub fn spherical_components(&self) -> [Complex64; 3] {
        let eps = self.polarization_in_axis_frame();
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for q in -1..=1 {
            let c = spherical_basis(q);
            out[(q + 1) as usize] = c.iter().zip(eps.iter()).map(|(a, b)| a * b).sum();
        }
        out
    }

    fn polarization_in_axis_frame(&self) -> Polarization {
        let z = self.quantization_axis;
        // any vector not parallel to z seeds the transverse frame
        let seed = if z[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let dot = seed[0] * z[0] + seed[1] * z[1] + seed[2] * z[2];
        let mut x = [seed[0] - dot * z[0], seed[1] - dot * z[1], seed[2] - dot * z[2]];
        let xn = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        x.iter_mut().for_each(|c| *c /= xn);
        let y = [
            z[1] * x[2] - z[2] * x[1],
            z[2] * x[0] - z[0] * x[2],
            z[0] * x[1] - z[1] * x[0],
        ];
        let project = |axis: [f64; 3]| -> Complex64 {
            self.polarization
                .iter()
                .zip(axis.iter())
                .map(|(e, a)| e * *a)
                .sum()
        };
        if z == [0.0, 0.0, 1.0] {
            return self.polarization;
        }
        [project(x), project(y), project(z)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peak_intensity_for_10_mw_25_um() {
        let l = LatticeConfig::new(10e-3, 25e-6, 786.5e-9).unwrap();
        assert!((l.peak_intensity() - 1.0186e7).abs() < 1e3);
        assert!((l.rayleigh_range() - 2.5e-3).abs() < 0.05e-3);
    }

    #[test]
    fn pi_light_projects_onto_q0() {
        let l = LatticeConfig::new(1e-3, 25e-6, 786.5e-9).unwrap();
        let c = l.spherical_components();
        assert!(c[0].norm() < 1e-15 && c[2].norm() < 1e-15);
        assert!((c[1].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tilted_axis_reexpresses_polarization() {
        let mut l = LatticeConfig::new(1e-3, 25e-6, 786.5e-9).unwrap();
        l.quantization_axis = [1.0, 0.0, 0.0];
        l.polarization = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
        let c = l.spherical_components();
        assert!((c[1].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_unnormalized_polarization() {
        let mut l = LatticeConfig::new(1e-3, 25e-6, 786.5e-9).unwrap();
        l.polarization[0] = Complex64::new(1.0, 0.0);
        assert!(l.validate().is_err());
    }
}

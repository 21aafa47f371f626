//! The moving-lattice optical-dipole force.

use crate::error::{Error, Result};

/// ODF pulse acting on each ion of a crystal.
#[derive(Debug, Clone, PartialEq)]
pub struct DriveSpec {
    /// Signed single-beam ac-Stark shift ΔE_ac,0 of each ion, J.
    pub stark_shifts: Vec<f64>,
    /// Lattice wavenumber k, rad/m.
    pub wavenumber: f64,
    /// Beat frequency Δω of the two beams, rad/s.
    pub beat: f64,
    /// Phase offset Δφ, rad.
    pub phase: f64,
    /// Pulse length t_ODF, s.
    pub duration: f64,
}

impl DriveSpec {
    pub fn new(stark_shifts: Vec<f64>, wavenumber: f64, beat: f64, duration: f64) -> Result<Self> {
        let d = DriveSpec {
            stark_shifts,
            wavenumber,
            beat,
            phase: 0.0,
            duration,
        };
        d.validate()?;
        Ok(d)
    }

    /// Drive with force amplitudes `forces` (N) rather than Stark shifts;
    /// the shift is F / (4k) with the sign of F.
    pub fn from_forces(forces: &[f64], wavenumber: f64, beat: f64, duration: f64) -> Result<Self> {
        let shifts = forces.iter().map(|f| f / (4.0 * wavenumber)).collect();
        DriveSpec::new(shifts, wavenumber, beat, duration)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.duration >= 0.0) {
            return Err(Error::Domain(format!("pulse duration {} s is negative", self.duration)));
        }
        if !(self.wavenumber > 0.0) {
            return Err(Error::Domain("lattice wavenumber must be positive".into()));
        }
        if self.stark_shifts.iter().any(|s| !s.is_finite()) {
            return Err(Error::Domain("non-finite ac-Stark shift".into()));
        }
        Ok(())
    }

    /// Peak force 4k|ΔE| on ion `i`.
    pub fn force_amplitude(&self, i: usize) -> f64 {
        4.0 * self.wavenumber * self.stark_shifts.get(i).copied().unwrap_or(0.0).abs()
    }
}

/// `F = -4 k ΔE_ac,0 sin(2kx - Δω t + Δφ)` on ion `ion` at position `x`
/// and time `t`. Ions without a listed shift feel no force.
pub fn odf_force_at(drive: &DriveSpec, ion: usize, x: f64, t: f64) -> f64 {
    let shift = match drive.stark_shifts.get(ion) {
        Some(s) => *s,
        None => return 0.0,
    };
    if shift == 0.0 {
        return 0.0;
    }
    let k = drive.wavenumber;
    -4.0 * k * shift * (2.0 * k * x - drive.beat * t + drive.phase).sin()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn drive(shift: f64) -> DriveSpec {
        DriveSpec::new(vec![shift], 2.0 * PI / 786.5e-9, 1e6, 1e-3).unwrap()
    }

    #[test]
    fn zero_shift_gives_zero_force() {
        let d = drive(0.0);
        for &(x, t) in &[(0.0, 0.0), (1e-7, 3e-6), (-2e-6, 1e-4)] {
            assert_eq!(odf_force_at(&d, 0, x, t), 0.0);
        }
    }

    #[test]
    fn peak_at_quarter_phase() {
        let mut d = drive(1e-30);
        d.phase = PI / 2.0;
        let f = odf_force_at(&d, 0, 0.0, 0.0);
        assert!((f + 4.0 * d.wavenumber * 1e-30).abs() < 1e-40);
    }

    #[test]
    fn spatial_period_is_half_wavelength() {
        let d = drive(1e-30);
        let lambda = 2.0 * PI / d.wavenumber;
        for &x in &[0.1e-6, 0.37e-6, 1.2e-6] {
            let a = odf_force_at(&d, 0, x, 2e-7);
            let b = odf_force_at(&d, 0, x + lambda / 2.0, 2e-7);
            assert!((a - b).abs() < 1e-9 * d.force_amplitude(0));
        }
    }

    #[test]
    fn missing_ion_feels_nothing() {
        assert_eq!(odf_force_at(&drive(1e-30), 1, 0.3e-6, 0.0), 0.0);
        assert!(DriveSpec::new(vec![0.0], 1.0, 1.0, -1.0).is_err());
    }
}

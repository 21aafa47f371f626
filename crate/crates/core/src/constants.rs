//! CODATA 2018 physical constants in SI units.

use std::f64::consts::PI;

/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// Planck constant, J s.
pub const H: f64 = 6.626_070_15e-34;
/// Reduced Planck constant, J s.
pub const HBAR: f64 = H / (2.0 * PI);
/// Speed of light in vacuum, m/s.
pub const C: f64 = 299_792_458.0;
/// Elementary charge, C.
pub const E_CHARGE: f64 = 1.602_176_634e-19;
/// Atomic mass unit, kg.
pub const AMU: f64 = 1.660_539_066_60e-27;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Vacuum wave impedance, Ohm.
pub const VACUUM_IMPEDANCE: f64 = 1.0 / (EPSILON_0 * C);
/// Conversion factor from wavenumbers (cm^-1) to Hz.
pub const WAVENUMBER_TO_HZ: f64 = 100.0 * C;

/// Coulomb coupling constant e^2 / (4 pi eps0), J m.
pub fn coulomb_constant() -> f64 {
    E_CHARGE * E_CHARGE / (4.0 * PI * EPSILON_0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn impedance_is_close_to_377_ohm() {
        assert!((VACUUM_IMPEDANCE - 376.730_313).abs() < 1e-3);
    }
}

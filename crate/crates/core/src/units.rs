//! Parsing of physical quantities written with an explicit unit, e.g.
//! `"15 mW"`, `"786.5 nm"` or `"641.15 kHz"`.
//!
//! Every quantity is converted to SI. Cyclic frequencies given in Hz are
//! converted to angular frequencies (rad/s) when the requested dimension is
//! [`Dimension::AngularFrequency`]; event rates keep Hz as s^-1.

use std::f64::consts::PI;

use crate::constants::{AMU, H};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Length,
    Time,
    Power,
    Mass,
    /// Angular frequency in rad/s. `Hz` inputs are multiplied by 2 pi.
    AngularFrequency,
    /// Event rate in s^-1. `Hz` inputs are taken as s^-1.
    Rate,
    Energy,
    Force,
    Intensity,
    Angle,
    /// ac-Stark shift per unit intensity, J m²/W.
    EnergyPerIntensity,
}

impl Dimension {
    fn units(self) -> &'static [(&'static str, f64)] {
        const TWO_PI: f64 = 2.0 * PI;
        match self {
            Dimension::Length => &[
                ("m", 1.0),
                ("mm", 1e-3),
                ("um", 1e-6),
                ("µm", 1e-6),
                ("nm", 1e-9),
            ],
            Dimension::Time => &[
                ("s", 1.0),
                ("ms", 1e-3),
                ("us", 1e-6),
                ("µs", 1e-6),
                ("ns", 1e-9),
                ("min", 60.0),
            ],
            Dimension::Power => &[("W", 1.0), ("mW", 1e-3), ("uW", 1e-6), ("µW", 1e-6)],
            Dimension::Mass => &[("kg", 1.0), ("u", AMU), ("amu", AMU), ("Da", AMU)],
            Dimension::AngularFrequency => &[
                ("rad/s", 1.0),
                ("krad/s", 1e3),
                ("Mrad/s", 1e6),
                ("Hz", TWO_PI),
                ("kHz", TWO_PI * 1e3),
                ("MHz", TWO_PI * 1e6),
                ("GHz", TWO_PI * 1e9),
                ("THz", TWO_PI * 1e12),
            ],
            Dimension::Rate => &[
                ("1/s", 1.0),
                ("s^-1", 1.0),
                ("Hz", 1.0),
                ("mHz", 1e-3),
                ("uHz", 1e-6),
                ("µHz", 1e-6),
                ("kHz", 1e3),
            ],
            Dimension::Energy => &[("J", 1.0), ("yJ", 1e-24), ("h*Hz", H), ("h*kHz", H * 1e3)],
            Dimension::Force => &[("N", 1.0), ("yN", 1e-24), ("zN", 1e-21)],
            Dimension::Intensity => &[("W/m^2", 1.0), ("W/m2", 1.0), ("W/cm^2", 1e4)],
            Dimension::Angle => &[("rad", 1.0), ("deg", PI / 180.0)],
            Dimension::EnergyPerIntensity => &[("J*m^2/W", 1.0), ("h*Hz*m^2/W", H)],
        }
    }
}

/// Parses `"<number> <unit>"` into an SI value of the given dimension.
pub fn parse_quantity(text: &str, dim: Dimension) -> Result<f64> {
    let text = text.trim();
    let split = text
        .find(|c: char| c.is_whitespace())
        .ok_or_else(|| Error::Config(format!("'{text}' has no unit; expected e.g. '1.0 {}'", dim.units()[0].0)))?;
    let (num, unit) = text.split_at(split);
    let unit = unit.trim();
    let value: f64 = num
        .parse()
        .map_err(|_| Error::Config(format!("'{num}' is not a number in '{text}'")))?;
    if !value.is_finite() {
        return Err(Error::Config(format!("non-finite value in '{text}'")));
    }
    let scale = dim
        .units()
        .iter()
        .find(|(u, _)| *u == unit)
        .map(|(_, s)| *s)
        .ok_or_else(|| {
            let known: Vec<_> = dim.units().iter().map(|(u, _)| *u).collect();
            Error::Config(format!(
                "unit '{unit}' is not valid for {dim:?}; expected one of {known:?}"
            ))
        })?;
    Ok(value * scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn converts_to_si() {
        assert_eq!(parse_quantity("15 mW", Dimension::Power).unwrap(), 15e-3);
        assert!((parse_quantity("786.5 nm", Dimension::Length).unwrap() - 786.5e-9).abs() < 1e-20);
        let w = parse_quantity("641.15 kHz", Dimension::AngularFrequency).unwrap();
        assert!((w - 2.0 * PI * 641.15e3).abs() < 1e-6);
        assert_eq!(parse_quantity("0.5 mHz", Dimension::Rate).unwrap(), 0.5e-3);
        assert!((parse_quantity("40 u", Dimension::Mass).unwrap() - 40.0 * AMU).abs() < 1e-40);
        assert_eq!(parse_quantity("2 h*kHz", Dimension::Energy).unwrap(), 2e3 * H);
    }

    #[test]
    fn rejects_missing_or_wrong_units() {
        assert!(parse_quantity("15", Dimension::Power).is_err());
        assert!(parse_quantity("15 nm", Dimension::Power).is_err());
        assert!(parse_quantity("abc mW", Dimension::Power).is_err());
    }
}

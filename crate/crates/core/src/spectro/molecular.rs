//! Spectroscopic constants and the line-oriented constants file.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::spectro::honl_london::SpinComponent;
use crate::spectro::state::{Electronic, RovibronicLevel};

/// The constants file shipped with the crate.
pub const BUILTIN_CONSTANTS: &str = include_str!("../../data/n2plus_a_x.txt");
pub const BUILTIN_NAME: &str = "builtin:n2plus_a_x.txt";

/// Constants of one electronic state, all in Hz.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ElectronicConstants {
    /// Vibronic term values T_v, keyed by v.
    pub term_values: BTreeMap<u32, f64>,
    /// Rotational constants B_v, keyed by v.
    pub rotational: BTreeMap<u32, f64>,
    /// Spin-rotation constant γ (case (b) states).
    pub spin_rotation: f64,
    /// Spin-orbit constant A_SO (case (a) states).
    pub spin_orbit: f64,
}

impl ElectronicConstants {
    fn term(&self, v: u32, which: &str) -> Result<(f64, f64)> {
        let t = self
            .term_values
            .get(&v)
            .ok_or_else(|| Error::Config(format!("no term value for {which}(v={v})")))?;
        let b = self
            .rotational
            .get(&v)
            .ok_or_else(|| Error::Config(format!("no rotational constant for {which}(v={v})")))?;
        Ok((*t, *b))
    }
}

/// Constants of the A ← X system.
#[derive(Debug, Clone, PartialEq)]
pub struct MolecularConstants {
    pub x: ElectronicConstants,
    pub a: ElectronicConstants,
    /// Vibronic Einstein A coefficients in s^-1, keyed by (v', v'').
    pub einstein_a: BTreeMap<(u32, u32), f64>,
    pub provenance: String,
    /// Source notes per key, as written in the file.
    pub citations: BTreeMap<String, String>,
}

impl MolecularConstants {
    pub fn builtin() -> Self {
        MolecularConstants::parse(BUILTIN_CONSTANTS, BUILTIN_NAME)
            .expect("shipped constants file is valid")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        MolecularConstants::parse(&text, &path.display().to_string())
    }

    /// Parses and validates a constants file.
    pub fn parse(text: &str, file: &str) -> Result<Self> {
        let perr = |line: usize, message: String| Error::Parse {
            file: file.to_string(),
            line,
            message,
        };

        enum Section {
            Header,
            State(Electronic),
            Band(u32, u32),
        }

        let mut section = Section::Header;
        let mut x = ElectronicConstants::default();
        let mut a = ElectronicConstants::default();
        let mut einstein_a = BTreeMap::new();
        let mut provenance = String::new();
        let mut citations = BTreeMap::new();
        let mut version = None;

        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let (content, note) = match raw.split_once('#') {
                Some((c, n)) => (c.trim(), n.trim()),
                None => (raw.trim(), ""),
            };
            if content.is_empty() {
                continue;
            }
            if let Some(header) = content.strip_prefix('[') {
                let header = header
                    .strip_suffix(']')
                    .ok_or_else(|| perr(lineno, format!("unterminated section '{content}'")))?;
                let words: Vec<&str> = header.split_whitespace().collect();
                section = match words.as_slice() {
                    ["state", "X"] => Section::State(Electronic::X),
                    ["state", "A"] => Section::State(Electronic::A),
                    ["band", up, low] => {
                        let up = up
                            .parse()
                            .map_err(|_| perr(lineno, format!("bad upper v '{up}'")))?;
                        let low = low
                            .parse()
                            .map_err(|_| perr(lineno, format!("bad lower v '{low}'")))?;
                        Section::Band(up, low)
                    }
                    _ => return Err(perr(lineno, format!("unknown section '[{header}]'"))),
                };
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| perr(lineno, format!("expected 'key = value', got '{content}'")))?;
            let key = key.trim();
            let value = value.trim();

            let number = || -> Result<f64> {
                value
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| perr(lineno, format!("'{value}' is not a number for '{key}'")))
            };

            let qualified = match &section {
                Section::Header => {
                    match key {
                        "version" => version = Some(number()? as u32),
                        "molecule" => {}
                        "provenance" => provenance = value.to_string(),
                        _ => return Err(perr(lineno, format!("unknown header key '{key}'"))),
                    }
                    key.to_string()
                }
                Section::State(el) => {
                    let target = match el {
                        Electronic::X => &mut x,
                        Electronic::A => &mut a,
                    };
                    if let Some(v) = vib_key(key, "term_value_v", "_hz") {
                        target.term_values.insert(v, number()?);
                    } else if let Some(v) = vib_key(key, "rotational_constant_v", "_hz") {
                        let b = number()?;
                        if b <= 0.0 {
                            return Err(perr(lineno, format!("{key} must be positive")));
                        }
                        target.rotational.insert(v, b);
                    } else if key == "spin_rotation_hz" {
                        target.spin_rotation = number()?;
                    } else if key == "spin_orbit_hz" {
                        target.spin_orbit = number()?;
                    } else {
                        return Err(perr(
                            lineno,
                            format!("unknown key '{key}' (keys need a unit suffix such as _hz)"),
                        ));
                    }
                    format!("{el:?}.{key}")
                }
                Section::Band(up, low) => {
                    if key != "einstein_a_per_s" {
                        return Err(perr(lineno, format!("unknown band key '{key}'")));
                    }
                    let coeff = number()?;
                    if coeff < 0.0 {
                        return Err(perr(lineno, "Einstein A must be non-negative".into()));
                    }
                    einstein_a.insert((*up, *low), coeff);
                    format!("band({up},{low}).{key}")
                }
            };
            if !note.is_empty() {
                citations.insert(qualified, note.to_string());
            }
        }

        if version.is_none() {
            return Err(Error::Config(format!("{file}: missing 'version'")));
        }
        let constants = MolecularConstants {
            x,
            a,
            einstein_a,
            provenance,
            citations,
        };
        constants.validate().map_err(|e| Error::Config(format!("{file}: {e}")))?;
        Ok(constants)
    }

    /// Checks that every listed band has the state constants it needs.
    pub fn validate(&self) -> Result<()> {
        if !self.x.term_values.contains_key(&0) {
            return Err(Error::Config("X state needs term_value_v0_hz".into()));
        }
        if self.a.spin_orbit == 0.0 {
            return Err(Error::Config("A state needs a non-zero spin_orbit_hz".into()));
        }
        for &(up, low) in self.einstein_a.keys() {
            self.band_ready(up, low)?;
        }
        Ok(())
    }

    /// Errors unless both vibronic levels of a band are fully specified.
    pub fn band_ready(&self, v_upper: u32, v_lower: u32) -> Result<()> {
        self.x.term(v_lower, "X")?;
        self.a.term(v_upper, "A")?;
        if !self.einstein_a.contains_key(&(v_upper, v_lower)) {
            return Err(Error::Config(format!(
                "no Einstein A coefficient for band ({v_upper},{v_lower})"
            )));
        }
        Ok(())
    }

    pub fn band_einstein_a(&self, v_upper: u32, v_lower: u32) -> Result<f64> {
        self.einstein_a.get(&(v_upper, v_lower)).copied().ok_or_else(|| {
            Error::Config(format!("no Einstein A coefficient for band ({v_upper},{v_lower})"))
        })
    }

    /// Band origin frequency in Hz (difference of vibronic term values).
    pub fn band_origin(&self, v_upper: u32, v_lower: u32) -> Result<f64> {
        let (tu, _) = self.a.term(v_upper, "A")?;
        let (tl, _) = self.x.term(v_lower, "X")?;
        Ok(tu - tl)
    }

    /// Level energy in Hz above X(v=0) without rotation.
    ///
    /// X: `T_v + B_v N(N+1)` plus `γN/2` (F1) or `-γ(N+1)/2` (F2).
    /// A: `T_v + A_SO Λ Σ + B_v (J(J+1) - Ω²)` with Λ = 1, Σ = Ω - 1.
    pub fn term_value(&self, level: &RovibronicLevel) -> Result<f64> {
        match level.electronic {
            Electronic::X => {
                let (t, b) = self.x.term(level.v, "X")?;
                let n = level
                    .n
                    .ok_or_else(|| Error::Domain("X-state level without N".into()))?
                    as f64;
                let spin = match level.ground_component() {
                    Some(SpinComponent::F1) => self.x.spin_rotation * n / 2.0,
                    _ => -self.x.spin_rotation * (n + 1.0) / 2.0,
                };
                Ok(t + b * n * (n + 1.0) + spin)
            }
            Electronic::A => {
                let (t, b) = self.a.term(level.v, "A")?;
                let omega = level
                    .omega
                    .ok_or_else(|| Error::Domain("A-state level without Ω".into()))?;
                let sigma = (omega - HalfInt::ONE).value();
                let j = level.j.value();
                let om = omega.value();
                Ok(t + self.a.spin_orbit * sigma + b * (j * (j + 1.0) - om * om))
            }
        }
    }

    /// Which Ω of the A state carries the F1 label: the lower spin-orbit
    /// component.
    pub fn upper_f1_omega(&self) -> HalfInt {
        if self.a.spin_orbit < 0.0 {
            HalfInt::from_twice(3)
        } else {
            HalfInt::HALF
        }
    }
}

fn vib_key(key: &str, prefix: &str, suffix: &str) -> Option<u32> {
    key.strip_prefix(prefix)?.strip_suffix(suffix)?.parse().ok()
}

/// Total radiative decay rate of A(v'), summing the Einstein coefficients
/// to X(v'' = 0..=5).
///
/// The result is in s^-1, which is also the natural linewidth in rad/s.
pub fn upper_state_decay_rate(constants: &MolecularConstants, v_upper: u32) -> Result<f64> {
    let missing: Vec<String> = (0..=5)
        .filter(|vl| !constants.einstein_a.contains_key(&(v_upper, *vl)))
        .map(|vl| format!("({v_upper},{vl})"))
        .collect();
    if !missing.is_empty() {
        return Err(Error::Config(format!(
            "Einstein A table lacks bands {}",
            missing.join(", ")
        )));
    }
    Ok((0..=5).map(|vl| constants.einstein_a[&(v_upper, vl)]).sum())
}

/// Converts a decay rate in s^-1 to the equivalent cyclic linewidth in Hz.
pub fn rate_to_cyclic_linewidth(rate: f64) -> f64 {
    rate / (2.0 * PI)
}

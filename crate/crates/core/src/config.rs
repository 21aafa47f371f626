//! Run configuration: a TOML file in which every physical quantity carries
//! an explicit unit.

use std::fmt;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::de::{self, Deserializer, Visitor};
use serde::Deserialize;

use crate::dynamics::crystal::{CrystalConfig, Ion};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::protocol::budget::BudgetInputs;
use crate::protocol::signal::LogicLaser;
use crate::spectro::catalog::{build_multi_band_catalog, TransitionLine};
use crate::spectro::lattice::{spherical_basis, LatticeConfig};
use crate::spectro::molecular::MolecularConstants;
use crate::spectro::state::RovibronicState;
use crate::thermometry::sideband::SidebandOrder;
use crate::thermometry::trace::linspace;
use crate::units::{parse_quantity, Dimension};

/// A physical quantity as written in the file, e.g. `"15 mW"`. Bare numbers
/// are rejected when the file is read.
#[derive(Debug, Clone, PartialEq)]
pub struct Quantity(pub String);

impl<'de> Deserialize<'de> for Quantity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct QuantityVisitor;
        impl Visitor<'_> for QuantityVisitor {
            type Value = Quantity;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a quantity string with a unit, such as \"15 mW\"")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Quantity, E> {
                Ok(Quantity(v.to_string()))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Quantity, E> {
                Err(E::custom(format!("bare number {v} has no unit; write it as \"{v} <unit>\"")))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Quantity, E> {
                self.visit_i64(v as i64)
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Quantity, E> {
                Err(E::custom(format!("bare number {v} has no unit; write it as \"{v} <unit>\"")))
            }
        }
        d.deserialize_any(QuantityVisitor)
    }
}

impl Quantity {
    pub fn get(&self, dim: Dimension, field: &str) -> Result<f64> {
        parse_quantity(&self.0, dim).map_err(|e| in_field(field, e))
    }
}

/// Config error naming the offending field, without repeating the error
/// family prefix.
fn in_field(field: &str, e: Error) -> Error {
    let detail = match e {
        Error::Config(m) | Error::Domain(m) => m,
        other => other.to_string(),
    };
    Error::Config(format!("{field}: {detail}"))
}

fn opt(q: &Option<Quantity>, dim: Dimension, field: &str, default: f64) -> Result<f64> {
    q.as_ref().map_or(Ok(default), |q| q.get(dim, field))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSection {
    pub power: Quantity,
    pub waist: Quantity,
    pub wavelength: Quantity,
    /// `pi`, `sigma+` or `sigma-` relative to the quantization axis.
    pub polarization: Option<String>,
    pub beat_frequency: Option<Quantity>,
    pub phase_offset: Option<Quantity>,
    pub quantization_axis: Option<[f64; 3]>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IonSection {
    pub label: String,
    pub mass: Quantity,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrystalSection {
    /// Single-ion axial frequency of the reference ion.
    pub trap_frequency: Quantity,
    /// Defaults to the mass of the first ion.
    pub reference_mass: Option<Quantity>,
    pub ions: Vec<IonSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogSection {
    pub bands: Vec<[u32; 2]>,
    pub n_max: u32,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSection {
    pub label: Option<String>,
    pub v: u32,
    pub n: u32,
    pub j: String,
    pub m_j: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub start: Quantity,
    pub stop: Quantity,
    pub points: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OdfSection {
    pub duration: Quantity,
    pub logic_ion_shift: Option<Quantity>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogicSection {
    pub wavelength: Quantity,
    pub pi_time: Quantity,
    pub order: Option<String>,
    pub detuning: Option<Quantity>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSection {
    pub start: Quantity,
    pub stop: Quantity,
    pub points: usize,
    #[serde(default)]
    pub shots: u32,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvertSection {
    /// Molecular forces to convert; defaults to those of the listed states.
    pub forces: Option<Vec<Quantity>>,
    pub stark_per_intensity: Option<Quantity>,
    #[serde(default)]
    pub fit_rabi: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackgroundSection {
    pub residual_nbar: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetSection {
    /// May be `"inf s"`.
    pub chemical_lifetime: Quantity,
    pub cycle_time: Quantity,
    /// Scattering rate during the ODF pulse; computed from the first state
    /// when absent and the lattice is configured.
    pub scatter_rate: Option<Quantity>,
    /// ODF pulse length; defaults to `odf.duration`.
    pub pulse: Option<Quantity>,
    pub target_sigma: f64,
    pub per_shot_separation: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: String,
    #[serde(default)]
    pub seed: u64,
    /// Constants file relative to the configuration; the shipped table when
    /// absent.
    pub constants: Option<String>,
    pub lattice: Option<LatticeSection>,
    pub crystal: Option<CrystalSection>,
    pub catalog: Option<CatalogSection>,
    #[serde(default)]
    pub states: Vec<StateSection>,
    pub spectrum: Option<GridSection>,
    pub odf: Option<OdfSection>,
    pub logic: Option<LogicSection>,
    pub probe: Option<ProbeSection>,
    pub convert: Option<ConvertSection>,
    pub background: Option<BackgroundSection>,
    pub budget: Option<BudgetSection>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn missing(section: &str) -> Error {
    Error::Config(format!("missing [{section}] section"))
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = RunConfig::parse(&text, &path.display().to_string())?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn parse(text: &str, file: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let line = e
                .span()
                .map(|s| text[..s.start.min(text.len())].lines().count().max(1))
                .unwrap_or(0);
            Error::Parse {
                file: file.to_string(),
                line,
                message: e.message().to_string(),
            }
        })
    }

    pub fn constants(&self) -> Result<MolecularConstants> {
        match &self.constants {
            None => Ok(MolecularConstants::builtin()),
            Some(p) => MolecularConstants::load(&self.base_dir.join(p)),
        }
    }

    pub fn lattice(&self) -> Result<LatticeConfig> {
        let s = self.lattice.as_ref().ok_or_else(|| missing("lattice"))?;
        let mut l = LatticeConfig::new(
            s.power.get(Dimension::Power, "lattice.power")?,
            s.waist.get(Dimension::Length, "lattice.waist")?,
            s.wavelength.get(Dimension::Length, "lattice.wavelength")?,
        )
        .map_err(|e| in_field("lattice", e))?;
        if let Some(axis) = s.quantization_axis {
            let n = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
            if !(n > 0.0) {
                return Err(Error::Config("lattice.quantization_axis is zero".into()));
            }
            l.quantization_axis = [axis[0] / n, axis[1] / n, axis[2] / n];
        }
        l.polarization = match s.polarization.as_deref().unwrap_or("pi") {
            "pi" => spherical_basis(0),
            "sigma+" => spherical_basis(1),
            "sigma-" => spherical_basis(-1),
            other => {
                return Err(Error::Config(format!(
                    "lattice.polarization '{other}' is not pi, sigma+ or sigma-"
                )))
            }
        };
        if l.quantization_axis != [0.0, 0.0, 1.0] {
            // polarization names refer to the quantization axis; express the
            // vector in the lab frame
            l.polarization = rotate_to_axis(l.polarization, l.quantization_axis);
        }
        l.beat_frequency = opt(&s.beat_frequency, Dimension::AngularFrequency, "lattice.beat_frequency", 0.0)?;
        l.phase_offset = opt(&s.phase_offset, Dimension::Angle, "lattice.phase_offset", 0.0)?;
        l.validate().map_err(|e| in_field("lattice", e))?;
        Ok(l)
    }

    pub fn crystal(&self) -> Result<CrystalConfig> {
        let s = self.crystal.as_ref().ok_or_else(|| missing("crystal"))?;
        let mut ions = Vec::new();
        for (i, ion) in s.ions.iter().enumerate() {
            ions.push(Ion::new(&ion.label, ion.mass.get(Dimension::Mass, &format!("crystal.ions[{i}].mass"))?));
        }
        let reference = match &s.reference_mass {
            Some(q) => q.get(Dimension::Mass, "crystal.reference_mass")?,
            None => ions.first().map(|i| i.mass).ok_or_else(|| Error::Config("crystal.ions is empty".into()))?,
        };
        CrystalConfig::new(
            s.trap_frequency.get(Dimension::AngularFrequency, "crystal.trap_frequency")?,
            reference,
            ions,
        )
        .map_err(|e| in_field("crystal", e))
    }

    pub fn catalog(&self, constants: &MolecularConstants) -> Result<Vec<TransitionLine>> {
        let s = self.catalog.as_ref().ok_or_else(|| missing("catalog"))?;
        let bands: Vec<(u32, u32)> = s.bands.iter().map(|b| (b[0], b[1])).collect();
        if bands.is_empty() {
            return Err(Error::Config("catalog.bands is empty".into()));
        }
        build_multi_band_catalog(constants, &bands, s.n_max)
    }

    /// Configured states with their labels.
    pub fn states(&self) -> Result<Vec<(String, RovibronicState)>> {
        if self.states.is_empty() {
            return Err(Error::Config("no [[states]] listed".into()));
        }
        self.states
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let field = |e: Error| in_field(&format!("states[{i}]"), e);
                let j: HalfInt = s.j.parse().map_err(field)?;
                let m: HalfInt = s.m_j.parse().map_err(field)?;
                let state = RovibronicState::ground(s.v, s.n, j, m).map_err(field)?;
                let label = s
                    .label
                    .clone()
                    .unwrap_or_else(|| format!("v{}_N{}_2J{}_2m{}", s.v, s.n, j.twice(), m.twice()));
                let allowed = |c: char| c.is_ascii_alphanumeric() || "_.+-".contains(c);
                if label.is_empty() || !label.chars().all(allowed) {
                    return Err(Error::Config(format!(
                        "states[{i}].label '{label}' may only hold letters, digits and _ . + -"
                    )));
                }
                Ok((label, state))
            })
            .collect()
    }

    pub fn spectrum_grid(&self) -> Result<Vec<f64>> {
        let s = self.spectrum.as_ref().ok_or_else(|| missing("spectrum"))?;
        grid(&s.start, &s.stop, s.points, Dimension::Length, "spectrum")
    }

    pub fn odf_duration(&self) -> Result<f64> {
        let s = self.odf.as_ref().ok_or_else(|| missing("odf"))?;
        let t = s.duration.get(Dimension::Time, "odf.duration")?;
        if !(t >= 0.0) {
            return Err(Error::Config("odf.duration must be nonnegative".into()));
        }
        Ok(t)
    }

    pub fn logic_ion_shift(&self) -> Result<f64> {
        let s = self.odf.as_ref().ok_or_else(|| missing("odf"))?;
        opt(&s.logic_ion_shift, Dimension::Energy, "odf.logic_ion_shift", 0.0)
    }

    pub fn logic_laser(&self) -> Result<LogicLaser> {
        let s = self.logic.as_ref().ok_or_else(|| missing("logic"))?;
        let mut laser = LogicLaser::red_sideband(
            s.wavelength.get(Dimension::Length, "logic.wavelength")?,
            s.pi_time.get(Dimension::Time, "logic.pi_time")?,
        );
        if !(laser.bare_rabi.is_finite() && laser.bare_rabi > 0.0) {
            return Err(Error::Config("logic.pi_time must be positive".into()));
        }
        laser.order = s
            .order
            .as_deref()
            .unwrap_or("red")
            .parse::<SidebandOrder>()
            .map_err(|e| in_field("logic.order", e))?;
        laser.detuning = opt(&s.detuning, Dimension::AngularFrequency, "logic.detuning", 0.0)?;
        Ok(laser)
    }

    pub fn probe_times(&self) -> Result<Vec<f64>> {
        let s = self.probe.as_ref().ok_or_else(|| missing("probe"))?;
        grid(&s.start, &s.stop, s.points, Dimension::Time, "probe")
    }

    pub fn shots(&self) -> u32 {
        self.probe.as_ref().map_or(0, |p| p.shots)
    }

    pub fn convert_forces(&self) -> Result<Option<Vec<f64>>> {
        let Some(s) = &self.convert else {
            return Err(missing("convert"));
        };
        let Some(forces) = &s.forces else {
            return Ok(None);
        };
        let values = forces
            .iter()
            .enumerate()
            .map(|(i, q)| q.get(Dimension::Force, &format!("convert.forces[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        if values.is_empty() || values.iter().any(|f| *f < 0.0) {
            return Err(Error::Config("convert.forces must be a non-empty list of nonnegative forces".into()));
        }
        Ok(Some(values))
    }

    pub fn stark_per_intensity(&self) -> Result<Option<f64>> {
        match self.convert.as_ref().and_then(|c| c.stark_per_intensity.as_ref()) {
            None => Ok(None),
            Some(q) => q.get(Dimension::EnergyPerIntensity, "convert.stark_per_intensity").map(Some),
        }
    }

    pub fn residual_nbar(&self) -> Result<Option<f64>> {
        match &self.background {
            None => Ok(None),
            Some(b) if b.residual_nbar >= 0.0 => Ok(Some(b.residual_nbar)),
            Some(_) => Err(Error::Config("background.residual_nbar must be nonnegative".into())),
        }
    }

    /// Budget inputs except the per-pulse scatter probability, plus the
    /// configured rate and pulse length if any.
    pub fn budget(&self) -> Result<(BudgetInputs, Option<f64>, Option<f64>)> {
        let s = self.budget.as_ref().ok_or_else(|| missing("budget"))?;
        let lifetime = if s.chemical_lifetime.0.trim().starts_with("inf") {
            f64::INFINITY
        } else {
            s.chemical_lifetime.get(Dimension::Time, "budget.chemical_lifetime")?
        };
        let inputs = BudgetInputs {
            chemical_lifetime: lifetime,
            cycle_time: s.cycle_time.get(Dimension::Time, "budget.cycle_time")?,
            per_pulse_scatter: 0.0,
            target_sigma: s.target_sigma,
            per_shot_separation: s.per_shot_separation,
        };
        let rate = match &s.scatter_rate {
            Some(q) => Some(q.get(Dimension::Rate, "budget.scatter_rate")?),
            None => None,
        };
        let pulse = match &s.pulse {
            Some(q) => Some(q.get(Dimension::Time, "budget.pulse")?),
            None => None,
        };
        Ok((inputs, rate, pulse))
    }

    /// Builds every configured section so errors surface before any
    /// computation. Returns a short description of what is present.
    pub fn validate(&self) -> Result<Vec<String>> {
        let mut present = Vec::new();
        let constants = self.constants()?;
        present.push(format!(
            "constants: {} bands ({})",
            constants.einstein_a.len(),
            self.constants.as_deref().unwrap_or("builtin")
        ));
        if self.lattice.is_some() {
            let l = self.lattice()?;
            present.push(format!("lattice: {:.4} nm, I0 = {:.4e} W/m^2", l.wavelength * 1e9, l.peak_intensity()));
        }
        if self.crystal.is_some() {
            let c = self.crystal()?;
            present.push(format!("crystal: {} ion(s)", c.ions.len()));
        }
        if self.catalog.is_some() {
            present.push(format!("catalog: {} lines", self.catalog(&constants)?.len()));
        }
        if !self.states.is_empty() {
            present.push(format!("states: {}", self.states()?.len()));
        }
        if self.spectrum.is_some() {
            present.push(format!("spectrum: {} points", self.spectrum_grid()?.len()));
        }
        if self.odf.is_some() {
            self.logic_ion_shift()?;
            present.push(format!("odf: {:.4e} s", self.odf_duration()?));
        }
        if self.logic.is_some() {
            present.push(format!("logic: {:?} sideband", self.logic_laser()?.order));
        }
        if self.probe.is_some() {
            present.push(format!("probe: {} times, {} shots", self.probe_times()?.len(), self.shots()));
        }
        if self.convert.is_some() {
            self.convert_forces()?;
            self.stark_per_intensity()?;
            present.push("convert".into());
        }
        if self.background.is_some() {
            self.residual_nbar()?;
            present.push("background".into());
        }
        if self.budget.is_some() {
            self.budget()?;
            present.push("budget".into());
        }
        Ok(present)
    }
}

fn grid(start: &Quantity, stop: &Quantity, points: usize, dim: Dimension, section: &str) -> Result<Vec<f64>> {
    let a = start.get(dim, &format!("{section}.start"))?;
    let b = stop.get(dim, &format!("{section}.stop"))?;
    if points == 0 {
        return Err(Error::Config(format!("{section}.points must be at least 1")));
    }
    if points > 1 && !(b > a) {
        return Err(Error::Config(format!("{section}.stop must exceed {section}.start")));
    }
    Ok(linspace(a, b, points))
}

/// Re-expresses a polarization given in the axis frame in the lab frame.
fn rotate_to_axis(eps: [Complex64; 3], z: [f64; 3]) -> [Complex64; 3] {
    let seed = if z[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let dot = seed[0] * z[0] + seed[1] * z[1] + seed[2] * z[2];
    let mut x = [seed[0] - dot * z[0], seed[1] - dot * z[1], seed[2] - dot * z[2]];
    let n = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    x.iter_mut().for_each(|c| *c /= n);
    let y = [
        z[1] * x[2] - z[2] * x[1],
        z[2] * x[0] - z[0] * x[2],
        z[0] * x[1] - z[1] * x[0],
    ];
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for i in 0..3 {
        out[i] = eps[0] * x[i] + eps[1] * y[i] + eps[2] * z[i];
    }
    out
}

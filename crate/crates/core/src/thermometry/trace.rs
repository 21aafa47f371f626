//! Sideband Rabi-flop traces: synthesis, shot noise and file exchange.

use std::io::{BufRead, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::thermometry::fock::FockDistribution;
use crate::thermometry::sideband::SidebandCoupling;

/// Excited-state probability of the logic ion versus probe time.
#[derive(Debug, Clone, PartialEq)]
pub struct RabiTrace {
    /// Probe times, s.
    pub times: Vec<f64>,
    pub excited: Vec<f64>,
    /// Shots per point when the trace is a measurement.
    pub shots: Option<Vec<u32>>,
    /// Generating parameters of a synthetic trace.
    pub source: Option<(FockDistribution, SidebandCoupling)>,
}

impl RabiTrace {
    pub fn new(times: Vec<f64>, excited: Vec<f64>, shots: Option<Vec<u32>>) -> Result<Self> {
        let t = RabiTrace {
            times,
            excited,
            shots,
            source: None,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.times.len() != self.excited.len() {
            return Err(Error::Domain("trace times and probabilities differ in length".into()));
        }
        if let Some(s) = &self.shots {
            if s.len() != self.times.len() {
                return Err(Error::Domain("trace shot counts differ in length".into()));
            }
        }
        if self.times.iter().any(|t| !(*t >= 0.0)) || self.times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("trace times must be nonnegative and increasing".into()));
        }
        if self.excited.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::Domain("excited-state probability outside [0, 1]".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Columns `time_us,Pe,shots`; shots is 0 for noiseless traces.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "time_us,Pe,shots")?;
        for i in 0..self.times.len() {
            let shots = self.shots.as_ref().map_or(0, |s| s[i]);
            writeln!(w, "{:.6},{:.9},{}", self.times[i] * 1e6, self.excited[i], shots)?;
        }
        Ok(())
    }

    /// Reads the format of [`RabiTrace::write_csv`]. A trace whose shot
    /// column is all zero is treated as noiseless.
    pub fn read_csv<R: BufRead>(reader: R, file: &str) -> Result<Self> {
        let parse_err = |line: usize, message: String| Error::Parse {
            file: file.to_string(),
            line,
            message,
        };
        let mut times = Vec::new();
        let mut excited = Vec::new();
        let mut shots = Vec::new();
        let mut saw_header = false;
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if !saw_header {
                if trimmed != "time_us,Pe,shots" {
                    return Err(parse_err(lineno, format!("expected header 'time_us,Pe,shots', found '{trimmed}'")));
                }
                saw_header = true;
                continue;
            }
            let cols: Vec<&str> = trimmed.split(',').map(str::trim).collect();
            if cols.len() != 3 {
                return Err(parse_err(lineno, format!("expected 3 columns, found {}", cols.len())));
            }
            let t: f64 = cols[0]
                .parse()
                .map_err(|_| parse_err(lineno, format!("bad time '{}'", cols[0])))?;
            let p: f64 = cols[1]
                .parse()
                .map_err(|_| parse_err(lineno, format!("bad probability '{}'", cols[1])))?;
            let s: u32 = cols[2]
                .parse()
                .map_err(|_| parse_err(lineno, format!("bad shot count '{}'", cols[2])))?;
            times.push(t * 1e-6);
            excited.push(p);
            shots.push(s);
        }
        if !saw_header {
            return Err(parse_err(1, "empty trace file".into()));
        }
        let shots = if shots.iter().all(|s| *s == 0) { None } else { Some(shots) };
        RabiTrace::new(times, excited, shots).map_err(|e| Error::Config(format!("{file}: {e}")))
    }
}

/// `P_e(t) = Σ_n p_n Ω_n² / (Ω_n² + Δ²) sin²(½ √(Ω_n² + Δ²) t)`, where Ω_n is
/// the sideband Rabi frequency out of |n>. States with no partner on the
/// chosen sideband do not contribute.
pub fn excited_probability(dist: &FockDistribution, coupling: &SidebandCoupling, t: f64) -> f64 {
    let omegas = coupling.rabi_frequencies(dist.n_max());
    excited_probability_with(dist, &omegas, coupling.detuning, t)
}

/// As [`excited_probability`] with precomputed Rabi frequencies.
pub(crate) fn excited_probability_with(
    dist: &FockDistribution,
    omegas: &[Option<f64>],
    detuning: f64,
    t: f64,
) -> f64 {
    let d2 = detuning * detuning;
    let mut pe = 0.0;
    for (p, omega) in dist.probs.iter().zip(omegas) {
        if *p == 0.0 {
            continue;
        }
        if let Some(omega) = omega {
            let o2 = omega * omega;
            let general = o2 + d2;
            if general > 0.0 {
                let s = (0.5 * general.sqrt() * t).sin();
                pe += p * o2 / general * s * s;
            }
        }
    }
    pe.clamp(0.0, 1.0)
}

pub fn synthesize_trace(
    dist: &FockDistribution,
    coupling: &SidebandCoupling,
    times: &[f64],
) -> RabiTrace {
    let omegas = coupling.rabi_frequencies(dist.n_max());
    RabiTrace {
        times: times.to_vec(),
        excited: times
            .iter()
            .map(|&t| excited_probability_with(dist, &omegas, coupling.detuning, t))
            .collect(),
        shots: None,
        source: Some((dist.clone(), *coupling)),
    }
}

/// Binomially sampled copy of `trace` with `shots` projective measurements
/// per point.
pub fn add_binomial_noise(trace: &RabiTrace, shots: u32, seed: u64) -> Result<RabiTrace> {
    if shots == 0 {
        return Ok(trace.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut excited = Vec::with_capacity(trace.len());
    for &p in &trace.excited {
        let b = Binomial::new(shots as u64, p.clamp(0.0, 1.0))
            .map_err(|e| Error::Domain(format!("binomial sampling: {e}")))?;
        excited.push(b.sample(&mut rng) as f64 / shots as f64);
    }
    Ok(RabiTrace {
        times: trace.times.clone(),
        excited,
        shots: Some(vec![shots; trace.len()]),
        source: trace.source.clone(),
    })
}

/// Evenly spaced probe times from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n)
            .map(|i| start + (end - start) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

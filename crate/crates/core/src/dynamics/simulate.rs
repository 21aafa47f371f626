//! Fourth-order Runge-Kutta integration of the driven ion equations of
//! motion.

use std::f64::consts::PI;
use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::constants::{coulomb_constant, HBAR, K_B};
use crate::dynamics::crystal::{equilibrium_positions, mode_vectors, normal_modes, CrystalConfig};
use crate::dynamics::drive::{odf_force_at, DriveSpec};
use crate::error::{Error, Result};

pub const DEFAULT_STEPS_PER_PERIOD: usize = 2000;

/// Fixed-step control for the integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    /// Steps per shortest relevant period (fastest mode or drive beat).
    pub steps_per_period: usize,
    /// Repeat the run at half the step and compare final energies.
    pub verify: bool,
    /// Allowed Richardson error estimate of the final energy, relative to
    /// max(|E|, ħω) with ω the slowest mode.
    pub tolerance: f64,
    /// Upper bound on stored samples; the stored grid stays uniform.
    pub max_samples: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl {
            steps_per_period: DEFAULT_STEPS_PER_PERIOD,
            verify: true,
            tolerance: 1e-6,
            max_samples: 20_000,
        }
    }
}

impl StepControl {
    pub fn with_steps_per_period(steps_per_period: usize) -> Self {
        StepControl {
            steps_per_period,
            ..Default::default()
        }
    }

    pub fn unverified(self) -> Self {
        StepControl {
            verify: false,
            ..self
        }
    }
}

/// Starting point of a simulation.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum InitialCondition {
    /// At rest at the origin (one ion) or at the equilibrium positions.
    #[default]
    Rest,
    /// Explicit absolute positions (m) and velocities (m/s).
    Explicit {
        positions: Vec<f64>,
        velocities: Vec<f64>,
    },
    /// Each normal mode drawn from a classical thermal distribution.
    Thermal { temperature: f64, seed: u64 },
}

/// Sampled motion of every ion.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// `positions[i][s]` is ion i at sample s, m.
    pub positions: Vec<Vec<f64>>,
    pub velocities: Vec<Vec<f64>>,
    /// Total energy above the crystal's minimum, J.
    pub energy: Vec<f64>,
    pub labels: Vec<String>,
    /// Integration step, s.
    pub step: f64,
}

impl Trajectory {
    pub fn final_energy(&self) -> f64 {
        *self.energy.last().expect("trajectory has at least one sample")
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Columns `time_s, x<i>_m, v<i>_m_per_s ..., energy_J`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let mut header = vec!["time_s".to_string()];
        for i in 0..self.positions.len() {
            header.push(format!("x{i}_m"));
            header.push(format!("v{i}_m_per_s"));
        }
        header.push("energy_J".into());
        writeln!(w, "{}", header.join(","))?;
        for s in 0..self.times.len() {
            write!(w, "{:.9e}", self.times[s])?;
            for i in 0..self.positions.len() {
                write!(w, ",{:.12e},{:.12e}", self.positions[i][s], self.velocities[i][s])?;
            }
            writeln!(w, ",{:.12e}", self.energy[s])?;
        }
        Ok(())
    }
}

/// Mean motional quantum number of a classical energy, n̄ = E / (ħω).
pub fn energy_to_nbar(energy: f64, omega: f64) -> f64 {
    energy / (HBAR * omega)
}

/// Coulomb forces (on ion 0, on ion 1) for ions at `x0 < x1`.
pub fn coulomb_forces(x0: f64, x1: f64) -> (f64, f64) {
    let d = x1 - x0;
    let f = coulomb_constant() / (d * d) * d.signum();
    (-f, f)
}

struct System<'a> {
    crystal: &'a CrystalConfig,
    drive: &'a DriveSpec,
    n: usize,
    k: f64,
    masses: [f64; 2],
    offset: f64,
}

type State = [f64; 4];

impl System<'_> {
    fn new<'a>(crystal: &'a CrystalConfig, drive: &'a DriveSpec) -> System<'a> {
        let n = crystal.ions.len();
        let mut masses = [1.0; 2];
        for (i, ion) in crystal.ions.iter().enumerate() {
            masses[i] = ion.mass;
        }
        let offset = if n == 2 { crystal.ground_energy() } else { 0.0 };
        System {
            crystal,
            drive,
            n,
            k: crystal.stiffness(),
            masses,
            offset,
        }
    }

    /// Derivative of (x0, x1, v0, v1).
    fn derivative(&self, t: f64, y: &State) -> State {
        let mut out = [0.0; 4];
        let mut f = [0.0; 2];
        for i in 0..self.n {
            f[i] = -self.k * y[i] + odf_force_at(self.drive, i, y[i], t);
        }
        if self.n == 2 {
            let (f0, f1) = coulomb_forces(y[0], y[1]);
            debug_assert!(f0 == -f1);
            f[0] += f0;
            f[1] += f1;
        }
        for i in 0..self.n {
            out[i] = y[2 + i];
            out[2 + i] = f[i] / self.masses[i];
        }
        out
    }

    fn energy(&self, y: &State) -> f64 {
        let mut e = 0.0;
        for i in 0..self.n {
            e += 0.5 * self.k * y[i] * y[i] + 0.5 * self.masses[i] * y[2 + i] * y[2 + i];
        }
        if self.n == 2 {
            e += coulomb_constant() / (y[1] - y[0]).abs();
        }
        e - self.offset
    }

    fn check(&self, t: f64, y: &State) -> Result<()> {
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Integration(format!("state diverged at t = {t:.6e} s")));
        }
        if self.n == 2 && y[1] <= y[0] {
            return Err(Error::Integration(format!(
                "ions crossed at t = {t:.6e} s ({:.4e} m, {:.4e} m)",
                y[0], y[1]
            )));
        }
        Ok(())
    }

    fn rk4(&self, t: f64, y: &State, h: f64) -> State {
        let add = |a: &State, b: &State, s: f64| {
            let mut r = *a;
            for i in 0..4 {
                r[i] += s * b[i];
            }
            r
        };
        let k1 = self.derivative(t, y);
        let k2 = self.derivative(t + 0.5 * h, &add(y, &k1, 0.5 * h));
        let k3 = self.derivative(t + 0.5 * h, &add(y, &k2, 0.5 * h));
        let k4 = self.derivative(t + h, &add(y, &k3, h));
        let mut r = *y;
        for i in 0..4 {
            r[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        r
    }

    /// Fastest relevant angular frequency: top mode or drive beat.
    fn fastest_frequency(&self) -> Result<f64> {
        let modes = normal_modes(self.crystal)?;
        Ok(modes.plus.unwrap_or(modes.minus).max(self.drive.beat.abs()))
    }

    fn slowest_mode(&self) -> Result<f64> {
        Ok(normal_modes(self.crystal)?.minus)
    }

    fn initial_state(&self, init: &InitialCondition) -> Result<State> {
        let mut y = [0.0; 4];
        let eq = if self.n == 2 {
            let (a, b) = equilibrium_positions(self.crystal)?;
            [a, b]
        } else {
            [0.0, 0.0]
        };
        match init {
            InitialCondition::Rest => {
                y[..2].copy_from_slice(&eq);
            }
            InitialCondition::Explicit {
                positions,
                velocities,
            } => {
                if positions.len() != self.n || velocities.len() != self.n {
                    return Err(Error::Domain(format!(
                        "initial condition must list {} positions and velocities",
                        self.n
                    )));
                }
                for i in 0..self.n {
                    y[i] = positions[i];
                    y[2 + i] = velocities[i];
                }
            }
            InitialCondition::Thermal { temperature, seed } => {
                if !(*temperature >= 0.0) {
                    return Err(Error::Domain("temperature must be nonnegative".into()));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let unit = Normal::new(0.0, 1.0).expect("unit normal");
                let kt = K_B * temperature;
                y[..2].copy_from_slice(&eq);
                let modes: Vec<(f64, [f64; 2])> = if self.n == 2 {
                    let (ip, op) = mode_vectors(self.crystal)?;
                    vec![(ip.omega, ip.vector), (op.omega, op.vector)]
                } else {
                    vec![(self.slowest_mode()?, [1.0, 0.0])]
                };
                for (omega, vector) in modes {
                    let q = unit.sample(&mut rng) * kt.sqrt() / omega;
                    let qdot = unit.sample(&mut rng) * kt.sqrt();
                    for i in 0..self.n {
                        y[i] += vector[i] * q / self.masses[i].sqrt();
                        y[2 + i] += vector[i] * qdot / self.masses[i].sqrt();
                    }
                }
            }
        }
        Ok(y)
    }

    fn run(
        &self,
        y0: State,
        t_end: f64,
        n_steps: usize,
        stride: usize,
        record: bool,
    ) -> Result<(Trajectory, State)> {
        let h = if n_steps > 0 { t_end / n_steps as f64 } else { 0.0 };
        let samples = n_steps / stride + 1;
        let cap = if record { samples } else { 1 };
        let mut traj = Trajectory {
            times: Vec::with_capacity(cap),
            positions: vec![Vec::with_capacity(cap); self.n],
            velocities: vec![Vec::with_capacity(cap); self.n],
            energy: Vec::with_capacity(cap),
            labels: self.crystal.ions.iter().map(|i| i.label.clone()).collect(),
            step: h,
        };
        let push = |traj: &mut Trajectory, t: f64, y: &State| {
            traj.times.push(t);
            for i in 0..self.n {
                traj.positions[i].push(y[i]);
                traj.velocities[i].push(y[2 + i]);
            }
            traj.energy.push(self.energy(y));
        };
        let mut y = y0;
        self.check(0.0, &y)?;
        if record {
            push(&mut traj, 0.0, &y);
        }
        for s in 0..n_steps {
            let t = s as f64 * h;
            y = self.rk4(t, &y, h);
            let t_next = (s + 1) as f64 * h;
            self.check(t_next, &y)?;
            if record && (s + 1) % stride == 0 {
                push(&mut traj, t_next, &y);
            }
        }
        if !record {
            push(&mut traj, t_end, &y);
        }
        Ok((traj, y))
    }
}

fn simulate(
    crystal: &CrystalConfig,
    drive: &DriveSpec,
    t_end: f64,
    control: &StepControl,
    init: &InitialCondition,
) -> Result<Trajectory> {
    crystal.validate()?;
    drive.validate()?;
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(Error::Domain(format!("end time {t_end} s is not a nonnegative number")));
    }
    if control.steps_per_period < 4 || control.max_samples < 2 {
        return Err(Error::Integration(format!(
            "step control infeasible: {} steps per period, {} samples",
            control.steps_per_period, control.max_samples
        )));
    }
    let system = System::new(crystal, drive);
    let y0 = system.initial_state(init)?;
    let period = 2.0 * PI / system.fastest_frequency()?;
    let dt_target = period / control.steps_per_period as f64;
    let raw_steps = (t_end / dt_target).ceil() as usize;
    if raw_steps > 500_000_000 {
        return Err(Error::Integration(format!(
            "step control infeasible: {raw_steps} steps requested"
        )));
    }
    let stride = raw_steps.div_ceil(control.max_samples).max(1);
    let n_steps = raw_steps.div_ceil(stride) * stride;
    let (traj, _) = system.run(y0, t_end, n_steps, stride, true)?;

    if control.verify && n_steps > 0 {
        let (fine, _) = system.run(y0, t_end, 2 * n_steps, 2 * n_steps, false)?;
        let e_fine = fine.final_energy();
        let e_coarse = traj.final_energy();
        let estimate = (e_fine - e_coarse).abs() / 15.0;
        let scale = e_fine.abs().max(HBAR * system.slowest_mode()?);
        if estimate > control.tolerance * scale {
            return Err(Error::Integration(format!(
                "Richardson check failed: final-energy error estimate {estimate:.3e} J exceeds {:.1e} of {scale:.3e} J; raise steps per period",
                control.tolerance
            )));
        }
    }
    Ok(traj)
}

/// Single ion in the trap under the ODF. Energy `½(k_t x² + m ẋ²)`.
pub fn simulate_single(
    crystal: &CrystalConfig,
    drive: &DriveSpec,
    t_end: f64,
    control: &StepControl,
) -> Result<Trajectory> {
    simulate_single_from(crystal, drive, t_end, control, &InitialCondition::Rest)
}

pub fn simulate_single_from(
    crystal: &CrystalConfig,
    drive: &DriveSpec,
    t_end: f64,
    control: &StepControl,
    init: &InitialCondition,
) -> Result<Trajectory> {
    if crystal.ions.len() != 1 {
        return Err(Error::Domain("simulate_single needs a one-ion crystal".into()));
    }
    simulate(crystal, drive, t_end, control, init)
}

/// Two Coulomb-coupled ions under the ODF. Energy is measured from the
/// equilibrium minimum 3 k_t x0².
pub fn simulate_two(
    crystal: &CrystalConfig,
    drive: &DriveSpec,
    t_end: f64,
    control: &StepControl,
) -> Result<Trajectory> {
    simulate_two_from(crystal, drive, t_end, control, &InitialCondition::Rest)
}

pub fn simulate_two_from(
    crystal: &CrystalConfig,
    drive: &DriveSpec,
    t_end: f64,
    control: &StepControl,
    init: &InitialCondition,
) -> Result<Trajectory> {
    if crystal.ions.len() != 2 {
        return Err(Error::Domain("simulate_two needs a two-ion crystal".into()));
    }
    simulate(crystal, drive, t_end, control, init)
}

/// Final energy after a drive-phase sweep; the excitation of two ions
/// depends on where the lattice nodes fall relative to the crystal.
pub fn phase_sweep(
    crystal: &CrystalConfig,
    drive: &DriveSpec,
    phases: &[f64],
    control: &StepControl,
) -> Result<Vec<(f64, f64)>> {
    phases
        .iter()
        .map(|&phase| {
            let d = DriveSpec {
                phase,
                ..drive.clone()
            };
            let traj = if crystal.ions.len() == 1 {
                simulate_single(crystal, &d, d.duration, control)?
            } else {
                simulate_two(crystal, &d, d.duration, control)?
            };
            Ok((phase, traj.final_energy()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ca() -> CrystalConfig {
        CrystalConfig::single_calcium(2.0 * PI * 641.15e3).unwrap()
    }

    fn k() -> f64 {
        2.0 * PI / 786.5e-9
    }

    #[test]
    fn zero_drive_stays_at_rest() {
        let c = ca();
        let d = DriveSpec::new(vec![0.0], k(), c.omega_t, 10e-6).unwrap();
        let t = simulate_single(&c, &d, 10e-6, &StepControl::default()).unwrap();
        assert!(t.positions[0].iter().all(|x| *x == 0.0));
        assert!(t.energy.iter().all(|e| *e == 0.0));
    }

    #[test]
    fn uniform_grid_ending_at_t_end() {
        let c = ca();
        let d = DriveSpec::new(vec![1e-30], k(), c.omega_t, 50e-6).unwrap();
        let mut control = StepControl::default();
        control.max_samples = 777;
        let t = simulate_single(&c, &d, 50e-6, &control).unwrap();
        assert!(t.len() <= 778);
        assert!((t.times.last().unwrap() - 50e-6).abs() < 1e-18);
        let dt = t.times[1] - t.times[0];
        for w in t.times.windows(2) {
            assert!(((w[1] - w[0]) - dt).abs() < 1e-9 * dt);
        }
    }

    #[test]
    fn two_ions_at_rest_keep_zero_energy() {
        let c = CrystalConfig::calcium_nitrogen(2.0 * PI * 641.15e3).unwrap();
        let d = DriveSpec::new(vec![0.0, 0.0], k(), 1e6, 20e-6).unwrap();
        let t = simulate_two(&c, &d, 20e-6, &StepControl::default()).unwrap();
        let scale = HBAR * normal_modes(&c).unwrap().minus;
        assert!(t.energy.iter().all(|e| e.abs() < 1e-6 * scale));
    }

    #[test]
    fn coulomb_forces_balance() {
        let (a, b) = coulomb_forces(-3.7e-6, 3.9e-6);
        assert_eq!(a, -b);
        assert!(b > 0.0);
    }

    #[test]
    fn crossing_is_an_error() {
        let c = CrystalConfig::calcium_nitrogen(2.0 * PI * 641.15e3).unwrap();
        let d = DriveSpec::new(vec![0.0, 0.0], k(), 1e6, 5e-6).unwrap();
        let init = InitialCondition::Explicit {
            positions: vec![-1e-6, 1e-6],
            velocities: vec![3e3, -3e3],
        };
        let r = simulate_two_from(&c, &d, 5e-6, &StepControl::default(), &init);
        assert!(matches!(r, Err(Error::Integration(_))));
    }

    #[test]
    fn infeasible_step_control() {
        let c = ca();
        let d = DriveSpec::new(vec![0.0], k(), 1e6, 1e-6).unwrap();
        let r = simulate_single(&c, &d, 1e-6, &StepControl::with_steps_per_period(2));
        assert!(matches!(r, Err(Error::Integration(_))));
    }

    #[test]
    fn thermal_start_is_seeded() {
        let c = CrystalConfig::calcium_nitrogen(2.0 * PI * 641.15e3).unwrap();
        let d = DriveSpec::new(vec![0.0, 0.0], k(), 1e6, 2e-6).unwrap();
        let init = InitialCondition::Thermal {
            temperature: 1e-3,
            seed: 7,
        };
        let control = StepControl::default().unverified();
        let a = simulate_two_from(&c, &d, 2e-6, &control, &init).unwrap();
        let b = simulate_two_from(&c, &d, 2e-6, &control, &init).unwrap();
        assert_eq!(a, b);
        assert!(a.energy[0] > 0.0);
    }

    #[test]
    fn nbar_conversion() {
        assert_eq!(energy_to_nbar(0.0, 1e6), 0.0);
        assert!((energy_to_nbar(HBAR * 2e6, 2e6) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let c = ca();
        let d = DriveSpec::new(vec![1e-30], k(), c.omega_t, 1e-6).unwrap();
        let mut control = StepControl::default();
        control.max_samples = 10;
        let t = simulate_single(&c, &d, 1e-6, &control).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "time_s,x0_m,v0_m_per_s,energy_J");
        assert_eq!(lines.count(), t.len());
    }
}

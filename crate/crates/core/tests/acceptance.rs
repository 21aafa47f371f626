//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::time::Instant;

use rustfft::{num_complex::Complex, FftPlanner};

use ionlogic::config::RunConfig;
use ionlogic::constants::H;
use ionlogic::dynamics::simulate::InitialCondition;
use ionlogic::dynamics::{
    equilibrium_positions, normal_modes, simulate_single, simulate_single_from, simulate_two_from, CrystalConfig,
    DriveSpec, Ion, StepControl,
};
use ionlogic::protocol::{
    convert_odf, distinguishability, molecular_signal, per_pulse_scatter, shot_budget, ConversionOptions,
    ConversionResult, Regime, SignalOptions,
};
use ionlogic::spectro::honl_london::{honl_london, sum_rule, Branch, SpinComponent};
use ionlogic::spectro::{
    ac_stark_shift, build_line_catalog, scattering_probability, scattering_rate, upper_state_decay_rate,
    wigner3j, LatticeConfig, MolecularConstants, RovibronicState, TransitionLine,
};
use ionlogic::thermometry::{
    add_binomial_noise, fit_nbar, linspace, synthesize_trace, FitOptions, FockDistribution, SidebandCoupling,
    SidebandOrder,
};
use ionlogic::HalfInt;

type Outcome = ionlogic::Result<(bool, String)>;

fn recipe(name: &str) -> ionlogic::Result<RunConfig> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("recipes").join(format!("{name}.toml"));
    RunConfig::load(&path)
}

fn h(t: i32) -> HalfInt {
    HalfInt::from_twice(t)
}

fn within(value: f64, target: f64, rel: f64) -> bool {
    (value - target).abs() <= rel * target.abs()
}

fn trap() -> f64 {
    2.0 * PI * 641.15e3
}

fn normal_mode_frequency() -> Outcome {
    let crystal = CrystalConfig::calcium_nitrogen(trap())?;
    let f = normal_modes(&crystal)?.minus / (2.0 * PI);
    Ok(((f - 690.2e3).abs() <= 0.2e3, format!("omega_-/2pi = {:.3} kHz (690.2 +/- 0.2)", f / 1e3)))
}

/// The R11(1/2) line of the (2,0) band alone.
fn r11_catalog(constants: &MolecularConstants) -> ionlogic::Result<Vec<TransitionLine>> {
    Ok(build_line_catalog(constants, (2, 0), 0)?
        .into_iter()
        .filter(|l| l.label() == "R11(1/2)")
        .collect())
}

/// Lattice of peak intensity 1e7 W/m^2 at 786.7 nm.
fn anchor_lattice() -> ionlogic::Result<LatticeConfig> {
    let waist = 25e-6;
    LatticeConfig::new(1e7 * PI * waist * waist / 2.0, waist, 786.7e-9)
}

fn ground_state() -> ionlogic::Result<RovibronicState> {
    RovibronicState::ground(0, 0, h(1), h(-1))
}

fn stark_anchor() -> Outcome {
    let constants = MolecularConstants::builtin();
    let shift = ac_stark_shift(&ground_state()?, &anchor_lattice()?, &r11_catalog(&constants)?)?;
    let hz = shift / H;
    Ok((within(hz, 1.3e3, 0.2), format!("shift = h * {hz:.1} Hz (1300 +/- 20%)")))
}

fn scattering_anchors() -> Outcome {
    let constants = MolecularConstants::builtin();
    let gamma = upper_state_decay_rate(&constants, 2)?;
    let gamma_ok = within(gamma, 85e3, 0.1);
    let rate = scattering_rate(&ground_state()?, &anchor_lattice()?, &r11_catalog(&constants)?, &constants)?;
    let rate_ok = within(rate, 300e-6, 0.2);
    let p = scattering_probability(rate, 10.0)?;
    let p_ok = within(p, 3e-3, 0.2) && (p - (1.0 - (-rate * 10.0f64).exp())).abs() < 1e-15;
    Ok((
        gamma_ok && rate_ok && p_ok,
        format!(
            "Gamma(v'=2) = {gamma:.0} s^-1 (85e3 +/- 10%; as angular/2pi it would be {:.0} Hz), Gamma_sc = {:.1} uHz (300 +/- 20%), P_sc(10 s) = {:.4}%",
            gamma / (2.0 * PI),
            rate * 1e6,
            p * 100.0
        ),
    ))
}

fn single_calcium() -> ionlogic::Result<CrystalConfig> {
    CrystalConfig::new(trap(), 40.0 * ionlogic::constants::AMU, vec![Ion::with_mass_u("Ca+", 40.0)])
}

fn dynamics_oracle() -> Outcome {
    let crystal = single_calcium()?;
    let omega = normal_modes(&crystal)?.minus;
    let period = 2.0 * PI / omega;
    let k = 2.0 * PI / 786.5e-9;
    let mass = crystal.ions[0].mass;
    let f0 = 5e-24;

    // resonant growth against F0² t² / (8m) at integer periods
    let t = 100.0 * period;
    let drive = DriveSpec::from_forces(&[f0], k, omega, t)?;
    let traj = simulate_single(&crystal, &drive, t, &StepControl::default())?;
    let x_max = traj.positions[0].iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let mut worst: f64 = 0.0;
    for n in [25usize, 50, 75, 100] {
        let tn = n as f64 * period;
        let idx = (0..traj.len())
            .min_by(|&a, &b| (traj.times[a] - tn).abs().total_cmp(&(traj.times[b] - tn).abs()))
            .unwrap();
        let expected = f0 * f0 * tn * tn / (8.0 * mass);
        worst = worst.max((traj.energy[idx] - expected).abs() / expected);
    }
    let linear = 2.0 * k * x_max < 0.05;
    let growth_ok = linear && worst < 5e-3;

    // convergence order from 20/40/80 steps per period against a fine run
    let run = |steps: usize| -> ionlogic::Result<f64> {
        let control = StepControl::with_steps_per_period(steps).unverified();
        Ok(simulate_single(&crystal, &drive, t, &control)?.final_energy())
    };
    let reference = run(4000)?;
    let errs = [run(20)?, run(40)?, run(80)?].map(|e| (e - reference).abs());
    let orders = [(errs[0] / errs[1]).log2(), (errs[1] / errs[2]).log2()];
    let order_ok = orders.iter().all(|p| *p >= 3.5);

    // free oscillation over 1000 periods
    let free = DriveSpec::new(vec![0.0], k, 0.0, 0.0)?;
    let init = InitialCondition::Explicit {
        positions: vec![50e-9],
        velocities: vec![0.0],
    };
    let free_traj = simulate_single_from(&crystal, &free, 1000.0 * period, &StepControl::default(), &init)?;
    let e0 = free_traj.energy[0];
    let drift = free_traj.energy.iter().fold(0.0f64, |a, e| a.max((e - e0).abs())) / e0;
    let drift_ok = drift < 1e-6;

    Ok((
        growth_ok && order_ok && drift_ok,
        format!(
            "resonant growth max rel. error {:.2e} (< 5e-3, 2k x_max = {:.3}); RK4 order {:.2}, {:.2} (>= 3.5); free drift {:.1e} (< 1e-6)",
            worst,
            2.0 * k * x_max,
            orders[0],
            orders[1],
            drift
        ),
    ))
}

fn mode_spectroscopy() -> Outcome {
    let crystal = CrystalConfig::calcium_nitrogen(trap())?;
    let modes = normal_modes(&crystal)?;
    let plus = modes.plus.expect("two-ion crystal has two modes");
    let (x0, x1) = equilibrium_positions(&crystal)?;
    let t_end = 400.0 * 2.0 * PI / modes.minus;
    let drive = DriveSpec::new(vec![0.0, 0.0], 2.0 * PI / 786.5e-9, 0.0, 0.0)?;
    let init = InitialCondition::Explicit {
        positions: vec![x0 + 20e-9, x1],
        velocities: vec![0.0, 0.0],
    };
    let control = StepControl::with_steps_per_period(200).unverified();
    let traj = simulate_two_from(&crystal, &drive, t_end, &control, &init)?;

    let xs = &traj.positions[0];
    let n = xs.len() - 1;
    let dt = traj.times[1] - traj.times[0];
    let mean = xs[..n].iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex<f64>> = (0..n)
        .map(|i| {
            let w = 0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos();
            Complex::new((xs[i] - mean) * w, 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let mag: Vec<f64> = buf[..n / 2].iter().map(|c| c.norm()).collect();
    let mut peaks: Vec<usize> = (1..mag.len() - 1).filter(|&i| mag[i] > mag[i - 1] && mag[i] >= mag[i + 1]).collect();
    peaks.sort_by(|&a, &b| mag[b].total_cmp(&mag[a]));
    let bin = 1.0 / (n as f64 * dt);
    let mut found: Vec<f64> = peaks.iter().take(2).map(|&i| i as f64 * bin).collect();
    found.sort_by(f64::total_cmp);
    let expected = [modes.minus / (2.0 * PI), plus / (2.0 * PI)];
    let ok = found.len() == 2 && found.iter().zip(expected).all(|(f, e)| (f - e).abs() <= bin);
    Ok((
        ok,
        format!(
            "FFT peaks {:.2} / {:.2} kHz vs closed form {:.2} / {:.2} kHz, bin {:.2} kHz",
            found.first().copied().unwrap_or(f64::NAN) / 1e3,
            found.get(1).copied().unwrap_or(f64::NAN) / 1e3,
            expected[0] / 1e3,
            expected[1] / 1e3,
            bin / 1e3
        ),
    ))
}

fn thermometry_round_trip() -> Outcome {
    let coupling = SidebandCoupling::new(PI / 7e-6, 0.0954, SidebandOrder::Red)?;
    let times = linspace(0.0, 200e-6, 101);
    let options = FitOptions::default();
    let nbars = [0.1, 1.0, 5.0, 20.0];
    let mut worst: f64 = 0.0;
    let mut clean = Vec::new();
    for nbar in nbars {
        let trace = synthesize_trace(&FockDistribution::coherent(nbar)?, &coupling, &times);
        let fit = fit_nbar(&trace, &coupling, &options)?;
        worst = worst.max((fit.nbar - nbar).abs() / nbar);
        clean.push(trace);
    }
    // 100 seeded trials cycling through the four values
    let hits: Vec<bool> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..100usize)
            .map(|trial| {
                let (clean, coupling, options) = (&clean, &coupling, &options);
                s.spawn(move || -> ionlogic::Result<bool> {
                    let which = trial % nbars.len();
                    let noisy = add_binomial_noise(&clean[which], 400, 1000 + trial as u64)?;
                    let fit = fit_nbar(&noisy, coupling, options)?;
                    Ok((fit.nbar - nbars[which]).abs() <= fit.uncertainty)
                })
            })
            .collect();
        handles.into_iter().map(|h| matches!(h.join().unwrap(), Ok(true))).collect()
    });
    let total = hits.iter().filter(|&&h| h).count();
    let per_value: Vec<usize> = (0..nbars.len())
        .map(|w| hits.iter().skip(w).step_by(nbars.len()).filter(|&&h| h).count())
        .collect();
    Ok((
        worst < 0.02 && total >= 60,
        format!(
            "noiseless worst rel. error {worst:.2e} (< 2%); 400-shot trials within 1 sigma: {total}/100 (>= 60; per nbar {per_value:?} of 25)"
        ),
    ))
}

fn molecular_traces() -> Outcome {
    let cfg = recipe("readout")?;
    let constants = cfg.constants()?;
    let lattice = cfg.lattice()?;
    let catalog = cfg.catalog(&constants)?;
    let crystal = cfg.crystal()?;
    let laser = cfg.logic_laser()?;
    let times = cfg.probe_times()?;
    let t_odf = cfg.odf_duration()?;
    let states = cfg.states()?;
    let options = SignalOptions::default();
    let signals = std::thread::scope(|s| {
        let handles: Vec<_> = states
            .iter()
            .map(|(_, st)| {
                let (lattice, catalog, crystal, laser, times, options) =
                    (&lattice, &catalog, &crystal, &laser, &times, &options);
                s.spawn(move || molecular_signal(st, lattice, catalog, crystal, t_odf, laser, times, options))
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect::<ionlogic::Result<Vec<_>>>()
    })?;

    let mut min_sigma = f64::INFINITY;
    let mut weakest = String::new();
    for i in 0..signals.len() {
        for j in i + 1..signals.len() {
            let d = distinguishability(&signals[i].trace, &signals[j].trace, 400)?;
            if d.sigma < min_sigma {
                min_sigma = d.sigma;
                weakest = format!("{}/{}", states[i].0, states[j].0);
            }
        }
    }
    let mut by_force: Vec<usize> = (0..signals.len()).collect();
    by_force.sort_by(|&a, &b| signals[a].force.total_cmp(&signals[b].force));
    let ordered = by_force.windows(2).all(|w| signals[w[0]].nbar < signals[w[1]].nbar);
    let flattest = (0..signals.len())
        .min_by(|&a, &b| {
            let peak = |i: usize| signals[i].trace.excited.iter().fold(0.0f64, |m, p| m.max(*p));
            peak(a).total_cmp(&peak(b))
        })
        .unwrap();
    let flat_is_v1 = states[flattest].1.level.v == 1;
    Ok((
        min_sigma > 5.0 && ordered && flat_is_v1,
        format!(
            "weakest pair {weakest} at {min_sigma:.2} sigma (> 5); n-bar order follows force order: {ordered}; flattest trace {}",
            states[flattest].0
        ),
    ))
}

fn conversion() -> Outcome {
    let cfg = recipe("force_conversion")?;
    let lattice = cfg.lattice()?;
    let crystal = cfg.crystal()?;
    let laser = cfg.logic_laser()?;
    let times = cfg.probe_times()?;
    let t_odf = cfg.odf_duration()?;
    let forces = cfg.convert_forces()?.expect("recipe lists forces");
    let options = ConversionOptions::default();
    let results: Vec<ConversionResult> = std::thread::scope(|s| {
        let handles: Vec<_> = forces
            .iter()
            .map(|&f2| {
                let (lattice, crystal, laser, times, options) = (&lattice, &crystal, &laser, &times, &options);
                s.spawn(move || convert_odf(f2, lattice, crystal, t_odf, laser, times, options))
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect::<ionlogic::Result<Vec<_>>>()
    })?;
    let decade = forces.last().unwrap() / forces.first().unwrap() >= 10.0;
    let monotone = results.windows(2).all(|w| w[1].f1 > w[0].f1);
    let off_identity = results.iter().map(|r| (r.f1 / r.f2 - 1.0).abs()).fold(f64::INFINITY, f64::min);
    let closure = results.iter().map(|r| r.closure_rms / r.fit.residual_rms).fold(0.0f64, f64::max);
    Ok((
        decade && monotone && off_identity > 0.05 && closure <= 2.0,
        format!(
            "F2 {:.0}..{:.0} yN: monotone {monotone}, min |F1/F2 - 1| = {off_identity:.3} (> 0.05), max closure/fit residual = {closure:.3} (<= 2)",
            forces[0] * 1e24,
            forces.last().unwrap() * 1e24
        ),
    ))
}

fn budget() -> Outcome {
    let cfg = recipe("budget")?;
    let (mut inputs, rate, pulse) = cfg.budget()?;
    let (rate, pulse) = (rate.expect("recipe rate"), pulse.expect("recipe pulse"));
    inputs.per_pulse_scatter = per_pulse_scatter(rate, pulse)?;
    let report = shot_budget(&inputs)?;
    let ok = (report.cycles - 15_000.0).abs() < 1e-9
        && report.regime == Regime::ChemistryLimited
        && report.pulses_before_scatter >= 2e6;
    Ok((
        ok,
        format!(
            "{:.3} cycles (15000), {}, {:.3e} pulses before a scatter (>= 2e6)",
            report.cycles, report.regime, report.pulses_before_scatter
        ),
    ))
}

fn special_functions() -> Outcome {
    let js: Vec<HalfInt> = (0..=8).map(h).collect();
    let w = |a: HalfInt, b: HalfInt, c: HalfInt, x: HalfInt, y: HalfInt, z: HalfInt| wigner3j(a, b, c, x, y, z);
    let mut worst: f64 = 0.0;
    let mut checks = 0usize;
    for &j1 in &js {
        for &j2 in &js {
            let triads: Vec<HalfInt> = js
                .iter()
                .copied()
                .filter(|&j3| {
                    let (a, b, c) = (j1.twice(), j2.twice(), j3.twice());
                    (a + b + c) % 2 == 0 && c <= a + b && c >= (a - b).abs()
                })
                .collect();
            // orthogonality over (m1, m2) at fixed m3
            for &j3 in &triads {
                for &j3p in &triads {
                    for m3 in j3.projections() {
                        if m3.abs() > j3p {
                            continue;
                        }
                        let mut sum = 0.0;
                        for m1 in j1.projections() {
                            let m2 = -m1 - m3;
                            if m2.abs() > j2 || m2.is_integer() != j2.is_integer() {
                                continue;
                            }
                            sum += w(j1, j2, j3, m1, m2, m3)? * w(j1, j2, j3p, m1, m2, m3)?;
                        }
                        let expected = if j3 == j3p { 1.0 } else { 0.0 };
                        worst = worst.max((j3.multiplicity() as f64 * sum - expected).abs());
                        checks += 1;
                    }
                }
                // permutation and reflection symmetries
                let phase = if ((j1 + j2 + j3).twice() / 2) % 2 == 0 { 1.0 } else { -1.0 };
                for m1 in j1.projections() {
                    for m2 in j2.projections() {
                        let m3 = -m1 - m2;
                        if m3.abs() > j3 || m3.is_integer() != j3.is_integer() {
                            continue;
                        }
                        let base = w(j1, j2, j3, m1, m2, m3)?;
                        let cyclic = w(j2, j3, j1, m2, m3, m1)?;
                        let cyclic2 = w(j3, j1, j2, m3, m1, m2)?;
                        let swap = w(j2, j1, j3, m2, m1, m3)?;
                        let reflect = w(j1, j2, j3, -m1, -m2, -m3)?;
                        for diff in [cyclic - base, cyclic2 - base, swap - phase * base, reflect - phase * base] {
                            worst = worst.max(diff.abs());
                        }
                        checks += 4;
                    }
                }
            }
        }
    }
    let mut hl_worst: f64 = 0.0;
    for t in (1..=21).step_by(2) {
        let j = h(t);
        for lower in [SpinComponent::F1, SpinComponent::F2] {
            let total: f64 = Branch::all()
                .filter(|b| b.lower == lower)
                .map(|b| honl_london(b, j))
                .sum::<ionlogic::Result<f64>>()?;
            hl_worst = hl_worst.max((total - sum_rule(j)).abs() / sum_rule(j));
        }
    }
    Ok((
        worst < 1e-12 && hl_worst < 1e-12,
        format!("{checks} 3j identities with j <= 4, worst deviation {worst:.1e}; Honl-London sum rule to J'' = 21/2, worst {hl_worst:.1e}"),
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("normal modes", normal_mode_frequency),
        ("ac-Stark anchor", stark_anchor),
        ("scattering anchors", scattering_anchors),
        ("dynamics oracle", dynamics_oracle),
        ("mode spectroscopy", mode_spectroscopy),
        ("thermometry round trip", thermometry_round_trip),
        ("molecular state traces", molecular_traces),
        ("force conversion", conversion),
        ("error budget", budget),
        ("special functions", special_functions),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = match check() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} {:>2} {name}: {detail} [{:.2} s]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

//! Command-line front end: `spectrum`, `rabi`, `convert`, `budget` and
//! `validate`, each driven by a TOML run configuration.
//!
//! Exit codes: 0 on success, 2 for configuration errors, 3 for numerical
//! failures.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::config::RunConfig;
use crate::constants::H;
use crate::dynamics::simulate::StepControl;
use crate::error::{Error, Result};
use crate::protocol::background::{background_model, distinguishability};
use crate::protocol::budget::{per_pulse_scatter, shot_budget};
use crate::protocol::convert::{convert_odf, ConversionOptions, ConversionResult};
use crate::protocol::signal::{molecular_signal, MolecularSignal, SignalOptions};
use crate::spectro::scattering::scattering_rate;
use crate::spectro::stark::{odf_amplitude, odf_spectrum};
use crate::thermometry::fit::FitOptions;
use crate::thermometry::trace::{add_binomial_noise, RabiTrace};

/// Shot count used for the distinguishability report of noiseless runs.
const REFERENCE_SHOTS: u32 = 400;

#[derive(Debug, Parser)]
#[command(name = "ionlogic", version, about = "Optical-dipole-force state detection of a molecular ion")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Run configuration (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    /// Overrides the seed of the configuration.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Integrator steps per shortest motional period.
    #[arg(long, global = true, value_name = "N")]
    pub steps_per_period: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// ODF amplitude and scattering rate versus lattice wavelength.
    Spectrum,
    /// Logic-ion Rabi traces for each configured molecular state.
    Rabi,
    /// Equivalent single-ion force for each molecular force.
    Convert,
    /// Cycle, scattering and shot budget.
    Budget,
    /// Check the configuration without computing anything.
    Validate,
}

/// Parses the process arguments, runs the command and returns the exit code.
pub fn main_from_env() -> i32 {
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(files) => {
            for f in files {
                println!("wrote {}", f.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_config() {
        2
    } else {
        3
    }
}

/// Runs one command and returns the files written.
pub fn run(cli: &Cli) -> Result<Vec<PathBuf>> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::Config("--config PATH is required".into()))?;
    let mut cfg = RunConfig::load(path)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if cli.steps_per_period == Some(0) {
        return Err(Error::Config("--steps-per-period must be positive".into()));
    }
    let control = cli
        .steps_per_period
        .map_or_else(StepControl::default, StepControl::with_steps_per_period);
    let summary = cfg.validate()?;
    let mut out = Output::new(&cli.out, &cfg);
    match cli.command {
        Command::Validate => {
            for line in summary {
                println!("{line}");
            }
            println!("{}: ok", path.display());
            return Ok(Vec::new());
        }
        Command::Spectrum => spectrum(&cfg, &mut out)?,
        Command::Rabi => rabi(&cfg, control, &mut out)?,
        Command::Convert => convert(&cfg, control, &mut out)?,
        Command::Budget => budget(&cfg, &mut out)?,
    }
    Ok(out.written)
}

/// Writes files atomically into the output directory, each headed by the
/// scenario and seed.
struct Output {
    dir: PathBuf,
    header: String,
    written: Vec<PathBuf>,
}

impl Output {
    fn new(dir: &Path, cfg: &RunConfig) -> Self {
        Output {
            dir: dir.to_path_buf(),
            header: format!("# scenario = {}\n# seed = {}\n", cfg.scenario, cfg.seed),
            written: Vec::new(),
        }
    }

    fn write(&mut self, name: &str, body: &str) -> Result<()> {
        self.write_inner(name, body)
            .map_err(|e| Error::Io(format!("{}: {e}", self.dir.join(name).display())))
    }

    fn write_inner(&mut self, name: &str, body: &str) -> std::io::Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let target = self.dir.join(name);
        let tmp = self.dir.join(format!(".{name}.tmp"));
        {
            let mut f = std::fs::File::create(&tmp)?;
            f.write_all(self.header.as_bytes())?;
            f.write_all(body.as_bytes())?;
            f.sync_all()?;
        }
        std::fs::rename(&tmp, &target)?;
        self.written.push(target);
        Ok(())
    }
}

/// Maps `f` over `items` on scoped threads, keeping the input order.
fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync) -> Vec<U> {
    std::thread::scope(|s| {
        let handles: Vec<_> = items.iter().map(|item| s.spawn(|| f(item))).collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "nan".to_string(), |x| format!("{x:.6e}"))
}

fn spectrum(cfg: &RunConfig, out: &mut Output) -> Result<()> {
    let constants = cfg.constants()?;
    let lattice = cfg.lattice()?;
    let catalog = cfg.catalog(&constants)?;
    let states = cfg.states()?;
    let grid = cfg.spectrum_grid()?;

    let spectra: Vec<_> = par_map(&states, |(_, s)| odf_spectrum(s, &lattice, &catalog, &grid));
    let (first_label, first) = &states[0];
    let scatter: Vec<Option<f64>> = grid
        .iter()
        .map(|&w| scattering_rate(first, &lattice.with_wavelength(w), &catalog, &constants).ok())
        .collect();

    let mut body = String::from("wavelength_nm");
    for (label, _) in &states {
        write!(body, ",F_{label}_yN").unwrap();
    }
    writeln!(body, ",scatter_{first_label}_per_s").unwrap();
    for (i, w) in grid.iter().enumerate() {
        write!(body, "{:.6}", w * 1e9).unwrap();
        for spec in &spectra {
            let f = spec[i].amplitude.as_ref().ok().map(|a| a.force * 1e24);
            write!(body, ",{}", fmt_opt(f)).unwrap();
        }
        writeln!(body, ",{}", fmt_opt(scatter[i])).unwrap();
    }
    out.write("spectrum.csv", &body)?;

    let mut lines = String::from(
        "label,wavelength_nm,frequency_hz,honl_london,reduced_dipole_sq_C2m2,einstein_a_per_s,lower,upper\n",
    );
    for l in &catalog {
        writeln!(
            lines,
            "{},{:.6},{:.9e},{:.6},{:.6e},{:.4e},\"{}\",\"{}\"",
            l.label(),
            l.wavelength() * 1e9,
            l.frequency,
            l.honl_london,
            l.reduced_dipole_sq,
            l.einstein_a,
            l.lower,
            l.upper
        )
        .unwrap();
    }
    out.write("lines.csv", &lines)?;

    let mut report = format!("lattice_wavelength_nm = {:.4}\n", lattice.wavelength * 1e9);
    writeln!(report, "peak_intensity_W_per_m2 = {:.6e}", lattice.peak_intensity()).unwrap();
    for (label, s) in &states {
        let a = odf_amplitude(s, &lattice, &catalog)?;
        let rate = scattering_rate(s, &lattice, &catalog, &constants)?;
        writeln!(report, "{label}.force_yN = {:.6}", a.force * 1e24).unwrap();
        writeln!(report, "{label}.stark_shift_h_Hz = {:.6}", a.stark_shift / H).unwrap();
        writeln!(report, "{label}.scatter_rate_per_s = {rate:.6e}").unwrap();
    }
    out.write("spectrum_report.txt", &report)
}

fn rabi(cfg: &RunConfig, control: StepControl, out: &mut Output) -> Result<()> {
    let constants = cfg.constants()?;
    let lattice = cfg.lattice()?;
    let catalog = cfg.catalog(&constants)?;
    let states = cfg.states()?;
    let crystal = cfg.crystal()?;
    let t_odf = cfg.odf_duration()?;
    let laser = cfg.logic_laser()?;
    let times = cfg.probe_times()?;
    let options = SignalOptions {
        logic_ion_shift: cfg.logic_ion_shift()?,
        beat: (lattice.beat_frequency != 0.0).then_some(lattice.beat_frequency),
        control,
    };
    let signals: Vec<MolecularSignal> = par_map(&states, |(_, s)| {
        molecular_signal(s, &lattice, &catalog, &crystal, t_odf, &laser, &times, &options)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let background = match cfg.residual_nbar()? {
        Some(r) => Some(background_model(r, &signals[0].coupling, &times)?),
        None => None,
    };

    let mut body = String::from("time_us");
    for (label, _) in &states {
        write!(body, ",Pe_{label}").unwrap();
    }
    if background.is_some() {
        body.push_str(",Pe_background");
    }
    body.push('\n');
    for (i, t) in times.iter().enumerate() {
        write!(body, "{:.6}", t * 1e6).unwrap();
        for s in &signals {
            write!(body, ",{:.9}", s.trace.excited[i]).unwrap();
        }
        if let Some(b) = &background {
            write!(body, ",{:.9}", b.excited[i]).unwrap();
        }
        body.push('\n');
    }
    out.write("rabi.csv", &body)?;

    let n_max = signals
        .iter()
        .filter_map(|s| s.trace.source.as_ref().map(|(d, _)| d.n_max()))
        .max()
        .unwrap_or(0);
    let mut fock = String::from("n");
    for (label, _) in &states {
        write!(fock, ",p_{label}").unwrap();
    }
    fock.push('\n');
    for n in 0..=n_max {
        write!(fock, "{n}").unwrap();
        for s in &signals {
            let p = s.trace.source.as_ref().and_then(|(d, _)| d.probs.get(n)).copied().unwrap_or(0.0);
            write!(fock, ",{p:.9e}").unwrap();
        }
        fock.push('\n');
    }
    out.write("fock.csv", &fock)?;

    let shots = cfg.shots();
    if shots > 0 {
        for (i, ((label, _), s)) in states.iter().zip(&signals).enumerate() {
            let noisy = add_binomial_noise(&s.trace, shots, cfg.seed.wrapping_add(i as u64))?;
            out.write(&format!("rabi_noisy_{label}.csv"), &trace_csv(&noisy))?;
        }
    }

    let ref_shots = if shots > 0 { shots } else { REFERENCE_SHOTS };
    let mut report = format!("odf_duration_s = {t_odf:.6e}\nreference_shots = {ref_shots}\n");
    writeln!(report, "lamb_dicke = {:.6}", signals[0].coupling.lamb_dicke).unwrap();
    for ((label, _), s) in states.iter().zip(&signals) {
        writeln!(report, "{label}.force_yN = {:.6}", s.force * 1e24).unwrap();
        writeln!(report, "{label}.stark_shift_h_Hz = {:.6}", s.stark_shift / H).unwrap();
        writeln!(report, "{label}.energy_J = {:.6e}", s.energy).unwrap();
        writeln!(report, "{label}.nbar = {:.6}", s.nbar).unwrap();
    }
    for i in 0..states.len() {
        for j in i + 1..states.len() {
            let d = distinguishability(&signals[i].trace, &signals[j].trace, ref_shots)?;
            writeln!(
                report,
                "distinguishability.{}.{} = {:.3} sigma at {:.3} us",
                states[i].0,
                states[j].0,
                d.sigma,
                d.best_time * 1e6
            )
            .unwrap();
        }
    }
    if let Some(b) = &background {
        for ((label, _), s) in states.iter().zip(&signals) {
            let d = distinguishability(b, &s.trace, ref_shots)?;
            writeln!(report, "distinguishability.background.{label} = {:.3} sigma", d.sigma).unwrap();
        }
    }
    out.write("rabi_report.txt", &report)
}

fn trace_csv(trace: &RabiTrace) -> String {
    let mut buf = Vec::new();
    trace.write_csv(&mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii csv")
}

fn convert(cfg: &RunConfig, control: StepControl, out: &mut Output) -> Result<()> {
    let lattice = cfg.lattice()?;
    let crystal = cfg.crystal()?;
    let t_odf = cfg.odf_duration()?;
    let laser = cfg.logic_laser()?;
    let times = cfg.probe_times()?;
    let forces = match cfg.convert_forces()? {
        Some(f) => f,
        None => {
            let constants = cfg.constants()?;
            let catalog = cfg.catalog(&constants)?;
            cfg.states()?
                .iter()
                .map(|(_, s)| odf_amplitude(s, &lattice, &catalog).map(|a| a.force))
                .collect::<Result<_>>()?
        }
    };
    let options = ConversionOptions {
        signal: SignalOptions {
            logic_ion_shift: cfg.logic_ion_shift()?,
            beat: (lattice.beat_frequency != 0.0).then_some(lattice.beat_frequency),
            control,
        },
        fit: FitOptions {
            fit_rabi: cfg.convert.as_ref().is_some_and(|c| c.fit_rabi),
            ..FitOptions::default()
        },
        stark_per_intensity: cfg.stark_per_intensity()?,
        ..ConversionOptions::default()
    };
    let results: Vec<ConversionResult> =
        par_map(&forces, |&f2| convert_odf(f2, &lattice, &crystal, t_odf, &laser, &times, &options))
            .into_iter()
            .collect::<Result<_>>()?;

    let mut body = String::from("f2_yN,f1_yN,identity_yN,nbar2,nbar1,fit_residual,closure_rms\n");
    for r in &results {
        writeln!(
            body,
            "{:.6},{:.6},{:.6},{:.6},{:.6},{:.6e},{:.6e}",
            r.f2 * 1e24,
            r.f1 * 1e24,
            r.f2 * 1e24,
            r.nbar2(),
            r.nbar1(),
            r.fit.residual_rms,
            r.closure_rms
        )
        .unwrap();
    }
    out.write("conversion.csv", &body)?;
    let mut report = String::new();
    for (i, r) in results.iter().enumerate() {
        writeln!(report, "[point {i}]\n{r}").unwrap();
    }
    out.write("conversion_report.txt", &report)
}

fn budget(cfg: &RunConfig, out: &mut Output) -> Result<()> {
    let (mut inputs, rate, pulse) = cfg.budget()?;
    let pulse = match pulse {
        Some(p) => p,
        None => cfg.odf_duration()?,
    };
    let rate = match rate {
        Some(r) => r,
        None => {
            let constants = cfg.constants()?;
            let lattice = cfg.lattice()?;
            let catalog = cfg.catalog(&constants)?;
            let states = cfg.states()?;
            scattering_rate(&states[0].1, &lattice, &catalog, &constants)?
        }
    };
    inputs.per_pulse_scatter = per_pulse_scatter(rate, pulse)?;
    let report = shot_budget(&inputs)?;
    let body = format!("scatter_rate_per_s = {rate:.6e}\npulse_s = {pulse:.6e}\n{report}");
    print!("{body}");
    out.write("budget.txt", &body)
}

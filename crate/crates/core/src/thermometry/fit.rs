//! Least-squares estimation of the mean occupation from a sideband trace.

use std::fmt;

use crate::error::{Error, Result};
use crate::thermometry::fock::FockDistribution;
use crate::thermometry::sideband::{SidebandCoupling, SidebandOrder};
use crate::thermometry::trace::{excited_probability_with, RabiTrace};

const GOLDEN: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Upper end of the n̄ search interval.
    pub nbar_max: f64,
    /// Points of the initial n̄ scan.
    pub grid_points: usize,
    /// Absolute n̄ tolerance of the golden-section refinement.
    pub tolerance: f64,
    /// Also fit the bare Rabi frequency.
    pub fit_rabi: bool,
    /// Search interval for Ω0 relative to the supplied value.
    pub rabi_bounds: (f64, f64),
    /// Model populations as thermal instead of coherent.
    pub thermal: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            nbar_max: 100.0,
            grid_points: 300,
            tolerance: 1e-7,
            fit_rabi: false,
            rabi_bounds: (0.5, 2.0),
            thermal: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub nbar: f64,
    /// One-standard-deviation uncertainty of n̄ from the curvature of χ²
    /// (or of the deviance for counted data).
    pub uncertainty: f64,
    /// Root-mean-square misfit of P_e.
    pub residual_rms: f64,
    pub chi2: f64,
    pub points: usize,
    pub bare_rabi: f64,
    /// True when the trace carried shot counts and was fitted by binomial
    /// likelihood; `chi2` is then the deviance.
    pub weighted: bool,
}

impl fmt::Display for FitReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "nbar = {:.6}", self.nbar)?;
        writeln!(f, "nbar_uncertainty = {:.6}", self.uncertainty)?;
        writeln!(f, "residual_rms = {:.6e}", self.residual_rms)?;
        writeln!(f, "chi2 = {:.6}", self.chi2)?;
        writeln!(f, "points = {}", self.points)?;
        writeln!(f, "bare_rabi_rad_per_s = {:.6e}", self.bare_rabi)?;
        writeln!(f, "weighted = {}", self.weighted)
    }
}

struct Objective<'a> {
    trace: &'a RabiTrace,
    /// Shots per point with the observed excitation count, for binomial data.
    counts: Option<Vec<(f64, f64)>>,
    thermal: bool,
}

/// Model probabilities are kept this far from 0 and 1 inside logarithms.
const PROBABILITY_FLOOR: f64 = 1e-12;

impl Objective<'_> {
    fn distribution(&self, nbar: f64) -> FockDistribution {
        let nbar = nbar.max(0.0);
        if self.thermal {
            FockDistribution::thermal(nbar).expect("nonnegative n̄")
        } else {
            FockDistribution::coherent(nbar).expect("nonnegative n̄")
        }
    }

    fn model(&self, nbar: f64, coupling: &SidebandCoupling) -> impl Iterator<Item = f64> + '_ {
        let dist = self.distribution(nbar);
        let omegas = coupling.rabi_frequencies(dist.n_max());
        let detuning = coupling.detuning;
        self.trace
            .times
            .iter()
            .map(move |&t| excited_probability_with(&dist, &omegas, detuning, t))
    }

    /// Binomial deviance `2 Σ [k ln(k/Np) + (N-k) ln((N-k)/N(1-p))]` for
    /// counted data, which is χ²-distributed near the optimum; plain sum of
    /// squared residuals otherwise.
    fn chi2(&self, nbar: f64, coupling: &SidebandCoupling) -> f64 {
        let model = self.model(nbar, coupling);
        match &self.counts {
            Some(counts) => model
                .zip(counts)
                .map(|(p, &(n, k))| {
                    let p = p.clamp(PROBABILITY_FLOOR, 1.0 - PROBABILITY_FLOOR);
                    let term = |obs: f64, expected: f64| if obs > 0.0 { obs * (obs / expected).ln() } else { 0.0 };
                    2.0 * (term(k, n * p) + term(n - k, n * (1.0 - p)))
                })
                .sum(),
            None => model
                .zip(&self.trace.excited)
                .map(|(p, &obs)| (obs - p).powi(2))
                .sum(),
        }
    }

    fn rms(&self, nbar: f64, coupling: &SidebandCoupling) -> f64 {
        let n = self.trace.len() as f64;
        let sq: f64 = self
            .model(nbar, coupling)
            .zip(&self.trace.excited)
            .map(|(p, &obs)| (obs - p).powi(2))
            .sum();
        (sq / n).sqrt()
    }
}

/// Shots and excitation counts of each point of a noisy trace.
fn binomial_counts(trace: &RabiTrace) -> Option<Vec<(f64, f64)>> {
    let shots = trace.shots.as_ref()?;
    Some(
        trace
            .excited
            .iter()
            .zip(shots)
            .map(|(&p, &n)| {
                let n = n.max(1) as f64;
                (n, (p * n).round().clamp(0.0, n))
            })
            .collect(),
    )
}

/// Golden-section minimum of `f` on `[a, b]`.
fn golden_section(mut a: f64, mut b: f64, tol: f64, f: impl Fn(f64) -> f64) -> f64 {
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    // an endpoint can beat the interior when the minimum sits on the bound
    [a, x, b]
        .into_iter()
        .min_by(|p, q| f(*p).total_cmp(&f(*q)))
        .unwrap()
}

/// Scan then refine a one-dimensional objective on `[lo, hi]`; returns the
/// minimizer and the spread of the scanned values.
fn scan_and_refine(
    lo: f64,
    hi: f64,
    points: usize,
    tol: f64,
    quadratic_grid: bool,
    f: impl Fn(f64) -> f64,
) -> (f64, f64) {
    let points = points.max(3);
    let grid: Vec<f64> = (0..points)
        .map(|i| {
            let u = i as f64 / (points - 1) as f64;
            lo + (hi - lo) * if quadratic_grid { u * u } else { u }
        })
        .collect();
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let (best, _) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = values[best];
    let a = grid[best.saturating_sub(1)];
    let b = grid[(best + 1).min(points - 1)];
    (golden_section(a, b, tol, &f), max - min)
}

/// Fits n̄ of a coherent (or thermal) motional distribution to a sideband
/// trace, holding the coupling fixed unless `options.fit_rabi` is set.
///
/// n̄ is located by a scan over `[0, nbar_max]` followed by golden-section
/// refinement. Traces with shot counts are fitted by binomial maximum
/// likelihood and the uncertainty is where the deviance rises by one;
/// noiseless traces use least squares scaled by the residual variance.
pub fn fit_nbar(trace: &RabiTrace, coupling: &SidebandCoupling, options: &FitOptions) -> Result<FitReport> {
    trace.validate()?;
    coupling.validate()?;
    if trace.len() < 8 {
        return Err(Error::Domain(format!("fit needs at least 8 points, got {}", trace.len())));
    }
    let slowest = match coupling.order {
        SidebandOrder::Red => coupling.rabi_frequency(1),
        _ => coupling.rabi_frequency(0),
    }
    .unwrap_or(0.0)
    .abs();
    let span = trace.times[trace.len() - 1] - trace.times[0];
    if slowest == 0.0 || span * slowest < std::f64::consts::PI {
        return Err(Error::Domain(format!(
            "trace spans {span:.3e} s, less than half a flop period {:.3e} s",
            std::f64::consts::PI / slowest
        )));
    }
    if !(options.nbar_max > 0.0) {
        return Err(Error::Domain("n̄ search bound must be positive".into()));
    }

    let counts = binomial_counts(trace);
    let weighted = counts.is_some();
    let objective = Objective {
        trace,
        counts,
        thermal: options.thermal,
    };

    let mut c = *coupling;
    let fit_n = |c: &SidebandCoupling| {
        scan_and_refine(0.0, options.nbar_max, options.grid_points, options.tolerance, true, |n| {
            objective.chi2(n, c)
        })
    };
    let (mut nbar, spread) = fit_n(&c);
    let flat = if weighted {
        spread < 1.0
    } else {
        spread <= 1e-12 * trace.len() as f64
    };
    if flat {
        return Err(Error::DegenerateFit(format!(
            "χ² varies by only {spread:.3e} over n̄ in [0, {}]; the trace does not constrain n̄",
            options.nbar_max
        )));
    }

    if options.fit_rabi {
        // n̄ and Ω0 are strongly correlated (sideband frequencies scale as
        // Ω0 √n̄), so minimize the profile χ²(Ω0) = min_n̄ χ²(n̄, Ω0)
        let profile = |rabi: f64| {
            let trial = SidebandCoupling { bare_rabi: rabi, ..c };
            let (n, _) = scan_and_refine(0.0, options.nbar_max, 80, options.tolerance, true, |n| {
                objective.chi2(n, &trial)
            });
            (n, objective.chi2(n, &trial))
        };
        let (lo, hi) = (
            coupling.bare_rabi * options.rabi_bounds.0,
            coupling.bare_rabi * options.rabi_bounds.1,
        );
        let (rabi, _) = scan_and_refine(lo, hi, 30, 1e-8 * coupling.bare_rabi, false, |r| profile(r).1);
        c.bare_rabi = rabi;
        nbar = profile(rabi).0;
    }

    let chi2 = objective.chi2(nbar, &c);
    let dof = trace.len().saturating_sub(if options.fit_rabi { 2 } else { 1 }).max(1);
    // Δ = 1 for the deviance; otherwise scale by the residual variance
    let target = if weighted { 1.0 } else { chi2 / dof as f64 };
    let uncertainty = curvature_uncertainty(nbar, target, |n| objective.chi2(n, &c));

    Ok(FitReport {
        nbar,
        uncertainty,
        residual_rms: objective.rms(nbar, &c),
        chi2,
        points: trace.len(),
        bare_rabi: c.bare_rabi,
        weighted,
    })
}

/// Half-width in n̄ at which a local quadratic model of χ² rises by `target`.
fn curvature_uncertainty(nbar: f64, target: f64, f: impl Fn(f64) -> f64) -> f64 {
    if target == 0.0 {
        return 0.0;
    }
    let h = 1e-3 * nbar.max(0.05);
    let (slope, curv) = if nbar - h >= 0.0 {
        let (fm, f0, fp) = (f(nbar - h), f(nbar), f(nbar + h));
        ((fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h))
    } else {
        let (f0, f1, f2) = (f(nbar), f(nbar + h), f(nbar + 2.0 * h));
        ((-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h), (f2 - 2.0 * f1 + f0) / (h * h))
    };
    let slope = slope.max(0.0);
    if curv > 0.0 {
        (-slope + (slope * slope + 2.0 * curv * target).sqrt()) / curv
    } else if slope > 0.0 {
        target / slope
    } else {
        f64::INFINITY
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermometry::trace::{add_binomial_noise, linspace, synthesize_trace};
    use std::f64::consts::PI;

    fn coupling() -> SidebandCoupling {
        SidebandCoupling::new(PI / 7e-6, 0.0954, SidebandOrder::Red).unwrap()
    }

    fn times() -> Vec<f64> {
        linspace(0.0, 150e-6, 61)
    }

    #[test]
    fn noiseless_round_trip() {
        for &nbar in &[0.1, 1.0, 5.0, 20.0] {
            let d = FockDistribution::coherent(nbar).unwrap();
            let tr = synthesize_trace(&d, &coupling(), &times());
            let fit = fit_nbar(&tr, &coupling(), &FitOptions::default()).unwrap();
            assert!((fit.nbar - nbar).abs() < 0.02 * nbar, "{nbar} -> {}", fit.nbar);
        }
    }

    #[test]
    fn all_zero_trace_fits_ground_state() {
        let zero = RabiTrace::new(times(), vec![0.0; 61], Some(vec![400; 61])).unwrap();
        let fit = fit_nbar(&zero, &coupling(), &FitOptions::default()).unwrap();
        assert!(fit.nbar < 0.01, "{}", fit.nbar);
        assert!(fit.residual_rms < 0.01);
    }

    #[test]
    fn joint_fit_recovers_rabi_frequency() {
        let truth = SidebandCoupling {
            bare_rabi: 1.1 * coupling().bare_rabi,
            ..coupling()
        };
        let d = FockDistribution::coherent(4.0).unwrap();
        let tr = synthesize_trace(&d, &truth, &times());
        let opts = FitOptions {
            fit_rabi: true,
            ..Default::default()
        };
        let fit = fit_nbar(&tr, &coupling(), &opts).unwrap();
        assert!((fit.bare_rabi / truth.bare_rabi - 1.0).abs() < 1e-3, "{}", fit.bare_rabi);
        assert!((fit.nbar - 4.0).abs() < 0.02);
    }

    #[test]
    fn preconditions_and_degeneracy() {
        let d = FockDistribution::coherent(2.0).unwrap();
        let short = synthesize_trace(&d, &coupling(), &linspace(0.0, 5e-6, 20));
        assert!(matches!(fit_nbar(&short, &coupling(), &FitOptions::default()), Err(Error::Domain(_))));
        let few = synthesize_trace(&d, &coupling(), &linspace(0.0, 150e-6, 5));
        assert!(fit_nbar(&few, &coupling(), &FitOptions::default()).is_err());

        // a carrier at vanishing η does not depend on n̄
        let carrier = SidebandCoupling::new(PI / 7e-6, 1e-9, SidebandOrder::Carrier).unwrap();
        let tr = add_binomial_noise(&synthesize_trace(&d, &carrier, &times()), 400, 3).unwrap();
        assert!(matches!(
            fit_nbar(&tr, &carrier, &FitOptions::default()),
            Err(Error::DegenerateFit(_))
        ));
    }

    #[test]
    fn report_is_key_value() {
        let d = FockDistribution::coherent(2.0).unwrap();
        let tr = synthesize_trace(&d, &coupling(), &times());
        let text = fit_nbar(&tr, &coupling(), &FitOptions::default()).unwrap().to_string();
        assert!(text.lines().all(|l| l.contains(" = ")));
        assert!(text.starts_with("nbar = "));
    }
}

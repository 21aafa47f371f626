//! Invariants checked over random inputs.

use std::f64::consts::PI;
use std::io::BufReader;

use proptest::prelude::*;

use ionlogic::config::RunConfig;
use ionlogic::protocol::{distinguishability, shot_budget, BudgetInputs};
use ionlogic::spectro::{ac_stark_shift, build_line_catalog, scattering_rate, LatticeConfig, MolecularConstants, RovibronicState};
use ionlogic::thermometry::{
    add_binomial_noise, fit_nbar, linspace, synthesize_trace, FitOptions, FockDistribution, RabiTrace, SidebandCoupling,
    SidebandOrder,
};
use ionlogic::HalfInt;

fn ground() -> RovibronicState {
    RovibronicState::ground(0, 0, HalfInt::HALF, -HalfInt::HALF).unwrap()
}

fn red(eta: f64) -> SidebandCoupling {
    SidebandCoupling::new(PI / 7e-6, eta, SidebandOrder::Red).unwrap()
}

proptest! {
    #[test]
    fn coherent_distribution_is_normalized(nbar in 0.0f64..60.0) {
        let d = FockDistribution::coherent(nbar).unwrap();
        prop_assert!((d.total() - 1.0).abs() < 1e-8);
        prop_assert!((d.mean() - nbar).abs() < 1e-6 * nbar.max(1.0));
        prop_assert!(d.probs.iter().all(|p| *p >= 0.0));
    }

    #[test]
    fn thermal_distribution_is_normalized(nbar in 0.0f64..30.0) {
        let d = FockDistribution::thermal(nbar).unwrap();
        prop_assert!((d.total() - 1.0).abs() < 1e-8);
        prop_assert!((d.mean() - nbar).abs() < 1e-6 * nbar.max(1.0));
    }

    #[test]
    fn excited_probability_is_a_probability(nbar in 0.0f64..30.0, eta in 0.01f64..0.5, t in 0.0f64..500e-6, order in 0usize..3) {
        let order = [SidebandOrder::Red, SidebandOrder::Carrier, SidebandOrder::Blue][order];
        let c = red(eta).with_order(order);
        let trace = synthesize_trace(&FockDistribution::coherent(nbar).unwrap(), &c, &[t]);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&trace.excited[0]));
    }

    #[test]
    fn sideband_frequencies_in_the_lamb_dicke_limit(n in 1usize..40) {
        let eta = 1e-6;
        let c = red(eta);
        let omega0 = c.bare_rabi;
        let rsb = c.rabi_frequency(n).unwrap();
        prop_assert!((rsb - omega0 * eta * (n as f64).sqrt()).abs() < 1e-6 * rsb);
        let bsb = c.with_order(SidebandOrder::Blue).rabi_frequency(n).unwrap();
        prop_assert!((bsb - omega0 * eta * ((n + 1) as f64).sqrt()).abs() < 1e-6 * bsb);
        let carrier = c.with_order(SidebandOrder::Carrier).rabi_frequency(n).unwrap();
        prop_assert!((carrier - omega0).abs() < 1e-9 * omega0);
    }

    #[test]
    fn stark_shift_and_scattering_scale_with_power(p1 in 1e-3f64..50e-3, scale in 1.1f64..10.0, nm in 784.0f64..790.0) {
        let catalog = build_line_catalog(&MolecularConstants::builtin(), (2, 0), 4).unwrap();
        let a = LatticeConfig::new(p1, 25e-6, nm * 1e-9).unwrap();
        let b = LatticeConfig::new(p1 * scale, 25e-6, nm * 1e-9).unwrap();
        if let (Ok(sa), Ok(sb)) = (ac_stark_shift(&ground(), &a, &catalog), ac_stark_shift(&ground(), &b, &catalog)) {
            prop_assert!((sb - scale * sa).abs() <= 1e-9 * sb.abs());
            let constants = MolecularConstants::builtin();
            let ra = scattering_rate(&ground(), &a, &catalog, &constants).unwrap();
            let rb = scattering_rate(&ground(), &b, &catalog, &constants).unwrap();
            prop_assert!(ra >= 0.0 && (rb - scale * ra).abs() <= 1e-9 * rb);
        }
    }

    /// Far from every line the ground-state shift follows the sign of the
    /// detuning.
    #[test]
    fn shift_sign_follows_detuning(red_nm in 800.0f64..1000.0, blue_nm in 600.0f64..775.0) {
        let catalog = build_line_catalog(&MolecularConstants::builtin(), (2, 0), 6).unwrap();
        let shift = |nm: f64| ac_stark_shift(&ground(), &LatticeConfig::new(10e-3, 25e-6, nm * 1e-9).unwrap(), &catalog).unwrap();
        prop_assert!(shift(red_nm) < 0.0);
        prop_assert!(shift(blue_nm) > 0.0);
    }

    #[test]
    fn trace_csv_round_trip(nbar in 0.0f64..10.0, shots in 1u32..1000, seed in any::<u64>()) {
        let times = linspace(0.0, 100e-6, 21);
        let clean = synthesize_trace(&FockDistribution::coherent(nbar).unwrap(), &red(0.1), &times);
        let noisy = add_binomial_noise(&clean, shots, seed).unwrap();
        let mut buf = Vec::new();
        noisy.write_csv(&mut buf).unwrap();
        let back = RabiTrace::read_csv(BufReader::new(&buf[..]), "mem").unwrap();
        prop_assert_eq!(back.shots, noisy.shots);
        for (a, b) in back.excited.iter().zip(&noisy.excited) {
            prop_assert!((a - b).abs() < 1e-8);
        }
        for (a, b) in back.times.iter().zip(&noisy.times) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn noise_is_deterministic_per_seed(nbar in 0.0f64..10.0, seed in any::<u64>()) {
        let times = linspace(0.0, 100e-6, 11);
        let clean = synthesize_trace(&FockDistribution::coherent(nbar).unwrap(), &red(0.1), &times);
        let a = add_binomial_noise(&clean, 100, seed).unwrap();
        let b = add_binomial_noise(&clean, 100, seed).unwrap();
        prop_assert_eq!(a.excited, b.excited);
    }

    #[test]
    fn distinguishability_is_symmetric(n1 in 0.0f64..5.0, n2 in 0.0f64..5.0, shots in 1u32..2000) {
        let times = linspace(0.0, 100e-6, 31);
        let a = synthesize_trace(&FockDistribution::coherent(n1).unwrap(), &red(0.1), &times);
        let b = synthesize_trace(&FockDistribution::coherent(n2).unwrap(), &red(0.1), &times);
        let ab = distinguishability(&a, &b, shots).unwrap().sigma;
        let ba = distinguishability(&b, &a, shots).unwrap().sigma;
        prop_assert_eq!(ab, ba);
        prop_assert_eq!(distinguishability(&a, &a, shots).unwrap().sigma, 0.0);
    }

    #[test]
    fn budget_arithmetic(lifetime in 1.0f64..1e4, cycle in 1e-3f64..1.0, p in 0.0f64..1e-3, target in 0.0f64..20.0, sep in 0.01f64..2.0) {
        let r = shot_budget(&BudgetInputs {
            chemical_lifetime: lifetime,
            cycle_time: cycle,
            per_pulse_scatter: p,
            target_sigma: target,
            per_shot_separation: sep,
        }).unwrap();
        prop_assert!((r.cycles - lifetime / cycle).abs() <= 1e-12 * r.cycles);
        prop_assert!(r.shots_needed >= (target / sep).powi(2) - 1e-9);
        prop_assert!(r.shots_needed < (target / sep).powi(2) + 1.0);
        prop_assert_eq!(r.regime.to_string() == "chemistry-limited", r.cycles * p < 1.0);
    }

    #[test]
    fn physical_fields_reject_bare_numbers(field in 0usize..3, value in 0.001f64..1000.0) {
        let mut fields = ["\"15 mW\"".to_string(), "\"25 um\"".to_string(), "\"786.5 nm\"".to_string()];
        fields[field] = format!("{value}");
        let text = format!(
            "scenario = \"p\"\n[lattice]\npower = {}\nwaist = {}\nwavelength = {}\n",
            fields[0], fields[1], fields[2]
        );
        prop_assert!(RunConfig::parse(&text, "p.toml").is_err());
    }
}

/// Fitted uncertainties of 400-shot traces describe the actual scatter of
/// the fitted n̄ (no low bias from points that fluctuate to zero).
#[test]
fn noisy_fit_pulls_are_unit_normal() {
    let c = red(0.0954);
    let times = linspace(0.0, 200e-6, 101);
    for nbar in [0.1, 2.0] {
        let clean = synthesize_trace(&FockDistribution::coherent(nbar).unwrap(), &c, &times);
        let pulls: Vec<f64> = (0..300u64)
            .map(|seed| {
                let fit = fit_nbar(&add_binomial_noise(&clean, 400, 7_000 + seed).unwrap(), &c, &FitOptions::default()).unwrap();
                (fit.nbar - nbar) / fit.uncertainty
            })
            .collect();
        let n = pulls.len() as f64;
        let mean = pulls.iter().sum::<f64>() / n;
        let sd = (pulls.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / n).sqrt();
        assert!(mean.abs() < 0.25 && (0.8..1.25).contains(&sd), "nbar {nbar}: pull mean {mean}, sd {sd}");
    }
}

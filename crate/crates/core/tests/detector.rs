mod common;

use nyquist_core::alias::alias_frequency;
use nyquist_core::synth::{Component, SignalSpec};
use nyquist_core::{detect_aliasing, plan_dual_rates, DetectorConfig, DualRatePlan};

use common::{fold, folded_frequency, naive_psd};
use proptest::prelude::*;

fn verdict(spec: &SignalSpec, plan: &DualRatePlan, duration: f64) -> nyquist_core::AliasVerdict {
    let s1 = spec.generate(plan.f1(), duration).unwrap();
    let s2 = spec.generate(plan.f2(), duration).unwrap();
    detect_aliasing(&s1, &s2, plan, &DetectorConfig::default()).unwrap()
}

#[test]
fn folding_law_matches_direct_spectrum() {
    // Tones above fs/2 land where the closed form says, for several rates.
    for (f, fs) in [(440.0, 600.0), (400.0, 600.0), (8.0, 10.0), (23.0, 10.0), (13.5, 15.0)] {
        let n = (fs * 4.0) as usize;
        let spec = SignalSpec::new(vec![Component::new(f, 1.0, 0.3)]);
        let x = spec.generate(fs, 4.0).unwrap();
        let folded = fold(&naive_psd(x.values()));
        let peak = folded
            .iter()
            .enumerate()
            .skip(1)
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        let bin_width = fs / n as f64;
        assert!((peak as f64 * bin_width - folded_frequency(f, fs)).abs() <= bin_width);
        assert!((alias_frequency(f, fs) - folded_frequency(f, fs)).abs() < 1e-12);
    }
}

#[test]
fn every_fold_position_with_ten_percent_energy_is_flagged() {
    // f2 = 10 Hz, f1 = 15 Hz, 20 s windows (0.05 Hz bins). A base tone below
    // f2/2 plus one tone carrying exactly 10% of the energy, swept over every
    // bin strictly between 5 and 7.5 Hz.
    let plan = plan_dual_rates(10.0, 1.5).unwrap();
    let base = 1.0;
    let extra = (base * base / 9.0f64).sqrt();
    let mut swept = 0;
    for k in 101..150 {
        let f = k as f64 * 0.05;
        let spec = SignalSpec::new(vec![
            Component::new(1.3, base, 0.4),
            Component::new(f, extra, 1.1),
        ]);
        let v = verdict(&spec, &plan, 20.0);
        assert!(v.aliased, "f = {f}: discrepancy {}", v.discrepancy);
        swept += 1;
    }
    assert_eq!(swept, 49);
}

#[test]
fn band_limited_sweep_is_never_flagged() {
    let plan = plan_dual_rates(10.0, 1.5).unwrap();
    for k in 1..100 {
        let f = k as f64 * 0.05;
        let spec = SignalSpec::new(vec![
            Component::new(1.3, 1.0, 0.4),
            Component::new(f, 3.0, 1.1),
        ])
        .with_noise(0.01, k);
        let v = verdict(&spec, &plan, 20.0);
        assert!(!v.aliased, "f = {f}: discrepancy {}", v.discrepancy);
    }
}

#[test]
fn blind_band_of_three_halves_ratio() {
    // With f1 = 1.5 f2 a lone tone near 3 f2 = 2 f1 folds to the same spot in
    // both streams, so the pair cannot see it. A documented limitation.
    let plan = plan_dual_rates(10.0, 1.5).unwrap();
    let spec = SignalSpec::new(vec![Component::new(31.0, 1.0, 0.0)]);
    assert_eq!(alias_frequency(31.0, 10.0), alias_frequency(31.0, 15.0));
    assert!(!verdict(&spec, &plan, 20.0).aliased);
    // A ratio without that coincidence catches it.
    let wide = plan_dual_rates(10.0, 1.7).unwrap();
    assert!(verdict(&spec, &wide, 20.0).aliased);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    // Arbitrary rates, durations and tone frequencies: nothing lines up
    // with the DFT bins.
    #[test]
    fn off_grid_band_limited_is_not_flagged(
        f2 in 0.5f64..50.0,
        cycles in 40.0f64..400.0,
        tones in proptest::collection::vec((0.005f64..0.49, 0.3f64..3.0, 0.0f64..6.3), 1..5),
    ) {
        let plan = plan_dual_rates(f2, 1.5).unwrap();
        let comps = tones.iter().map(|&(r, a, p)| Component::new(r * f2, a, p)).collect();
        let v = verdict(&SignalSpec::new(comps), &plan, cycles / f2);
        prop_assert!(!v.aliased, "{}", v.discrepancy);
    }

    #[test]
    fn off_grid_tenth_of_energy_above_half_rate_is_flagged(
        f2 in 0.5f64..50.0,
        cycles in 40.0f64..400.0,
        tones in proptest::collection::vec((0.005f64..0.49, 0.3f64..3.0, 0.0f64..6.3), 1..5),
        high in 0.51f64..0.74,
        share in 0.1f64..0.9,
        phase in 0.0f64..6.3,
    ) {
        let plan = plan_dual_rates(f2, 1.5).unwrap();
        let mut comps: Vec<Component> = tones.iter().map(|&(r, a, p)| Component::new(r * f2, a, p)).collect();
        let base: f64 = comps.iter().map(|c| c.amplitude * c.amplitude / 2.0).sum();
        let amp = (2.0 * base * share / (1.0 - share)).sqrt();
        comps.push(Component::new(high * f2, amp, phase));
        let v = verdict(&SignalSpec::new(comps), &plan, cycles / f2);
        prop_assert!(v.aliased, "{}", v.discrepancy);
    }
}

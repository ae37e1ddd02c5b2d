//! Reproducibility of the simulator and its agreement with the closed forms.

use rand::Rng;

use umi_core::channel::LinkVariant;
use umi_core::exec::Execution;
use umi_core::fluctuation::FluctuationModel;
use umi_core::montecarlo::SimConfig;
use umi_core::rng::trial_rng;
use umi_core::units::{db_to_linear, dbm_to_watts};
use umi_core::{Scenario, TailMode};

fn jittered_passive() -> Scenario {
    Scenario::reference_passive().with_fluctuation(FluctuationModel::from_degrees(0.0, 0.0, 1.0, 1.0).unwrap())
}

#[test]
fn estimates_are_bit_identical_across_schedules() {
    let s = jittered_passive().with_pt_dbm(30.0);
    let sim = SimConfig::new(20_000, 7);
    let reference = s.simulate(&sim.with_execution(Execution::Sequential)).unwrap();
    assert_eq!(reference, s.simulate(&sim.with_execution(Execution::Sequential)).unwrap());
    for threads in [1, 2, 5] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let est = pool.install(|| s.simulate(&sim.with_execution(Execution::Parallel)).unwrap());
        assert_eq!(est, reference, "{threads} threads");
    }
    assert_ne!(reference, s.simulate(&SimConfig::new(20_000, 8)).unwrap());
}

#[test]
fn batched_powers_match_single_runs() {
    let s = Scenario::reference_active().with_fluctuation(FluctuationModel::from_degrees(0.0, 0.0, 1.0, 1.0).unwrap());
    let sim = SimConfig::new(5_000, 3);
    let powers = [dbm_to_watts(-10.0), dbm_to_watts(0.0)];
    let batch = s.simulate_powers(&powers, &sim).unwrap();
    for (p, est) in powers.iter().zip(batch) {
        assert_eq!(est, s.with_pt(*p).simulate(&sim).unwrap());
    }
}

/// Bisects transmit power (dBm) so the closed-form outage hits `target`.
fn tune_power(s: &Scenario, target: f64) -> Option<Scenario> {
    let op = |dbm: f64| s.with_pt_dbm(dbm).outage(s.default_method(), TailMode::TailAsOutage).unwrap().probability;
    let (mut lo, mut hi) = (-40.0, 80.0);
    if !(op(lo) > target && op(hi) < target) {
        return None;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if op(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(s.with_pt_dbm(0.5 * (lo + hi)))
}

/// Twenty random operating points with outage between 1e-3 and 0.5; the
/// closed form must fall inside the simulated 95% interval in at least 18.
#[test]
fn closed_form_lies_inside_simulated_interval() {
    let mut rng = trial_rng(0x0c1_5eed, 0);
    let mut lines = Vec::new();
    let mut hits = 0;
    while lines.len() < 20 {
        let sigma = rng.random_range(0.3..1.5);
        let n_side = rng.random_range(4..=16);
        let k_db = rng.random_range(0.0..15.0);
        let target = 10f64.powf(rng.random_range(-3.0..(0.5f64).log10()));
        let base = if rng.random_bool(0.5) {
            Scenario::reference_active()
        } else {
            Scenario::reference_passive()
        };
        let mut s = base
            .with_fluctuation(FluctuationModel::from_degrees(0.0, 0.0, sigma, sigma).unwrap())
            .with_elements(n_side)
            .with_resolution(60, 1)
            .unwrap();
        s.channel.k0 = db_to_linear(k_db);
        s.channel.k1 = db_to_linear(k_db);
        let Some(s) = tune_power(&s, target) else { continue };
        let closed = s.outage(s.default_method(), TailMode::TailAsOutage).unwrap().probability;
        let est = s.simulate(&SimConfig::new(1_000_000, lines.len() as u64)).unwrap();
        let inside = est.ci_low <= closed && closed <= est.ci_high;
        hits += inside as usize;
        lines.push(format!(
            "{} N={} sigma={sigma:.2} K={k_db:.1}dB closed={closed:.4e} mc={:.4e} [{:.4e}, {:.4e}] {}",
            if matches!(s.link.variant, LinkVariant::Active { .. }) { "active " } else { "passive" },
            s.link.n_elements,
            est.point,
            est.ci_low,
            est.ci_high,
            if inside { "inside" } else { "outside" }
        ));
    }
    assert!(hits >= 18, "{hits}/20 inside:\n{}", lines.join("\n"));
}

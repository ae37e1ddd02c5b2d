//! Discrete pattern law against exact-chain sampling, and its cost.

use std::hint::black_box;
use std::time::{Duration, Instant};

use umi_core::exec::Execution;
use umi_core::fluctuation::FluctuationModel;
use umi_core::montecarlo::{sample_pattern_gains, PatternMode};
use umi_core::pattern::pattern_cdf;
use umi_core::validation::pattern_cdf_distance;
use umi_core::Scenario;

fn jittered() -> Scenario {
    Scenario::reference_passive().with_fluctuation(FluctuationModel::from_degrees(0.0, 0.0, 1.0, 1.0).unwrap())
}

#[test]
fn finer_sectors_never_move_away_from_simulation() {
    let s = jittered();
    let samples = sample_pattern_gains(
        &s.geometry,
        &s.fluctuation,
        &s.array,
        PatternMode::Exact,
        1_000_000,
        41,
        Execution::Parallel,
    )
    .unwrap();
    let distances: Vec<f64> = [5usize, 15, 30, 60]
        .iter()
        .map(|&d| pattern_cdf_distance(&s.with_resolution(d, 1).unwrap(), &mut samples.clone()).unwrap())
        .collect();
    assert!(distances.windows(2).all(|w| w[1] <= w[0]), "{distances:?}");
}

#[test]
fn stable_platform_cdf_is_a_unit_step_at_the_element_gain() {
    let s = Scenario::reference_passive().with_fluctuation(FluctuationModel::stable());
    let dist = s.pattern().unwrap();
    let q_e = s.element_gain();
    assert_eq!(pattern_cdf(&dist, q_e * (1.0 - 1e-12)), 0.0);
    assert_eq!(pattern_cdf(&dist, q_e), 1.0);
}

fn best_of(runs: usize, reps: usize, f: impl Fn()) -> Duration {
    (0..runs)
        .map(|_| {
            let t = Instant::now();
            for _ in 0..reps {
                f();
            }
            t.elapsed()
        })
        .min()
        .unwrap()
}

#[test]
fn cost_grows_with_the_atom_count() {
    let coarse = jittered().with_resolution(15, 1).unwrap();
    let fine = jittered().with_resolution(60, 1).unwrap();
    // 16x the atoms; allow for timer and cache noise
    let t15 = best_of(7, 400, || {
        black_box(black_box(&coarse).pattern().unwrap());
    });
    let t60 = best_of(7, 25, || {
        black_box(black_box(&fine).pattern().unwrap());
    });
    let ratio = (t60.as_secs_f64() / 25.0) / (t15.as_secs_f64() / 400.0);
    assert!(ratio <= 20.0, "D = 60 costs {ratio:.1}x D = 15");
}

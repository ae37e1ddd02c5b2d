//! Fading moments against direct simulation of the Rician hops.

use umi_core::channel::{active_power_stats, cascade_moments, power_sum_stats, rician_mean_envelope, ChannelParams};
use umi_core::exec::{map_range, Execution};
use umi_core::montecarlo::sample_rician_envelope;
use umi_core::rng::trial_rng;
use umi_core::stats::mean_variance;
use umi_core::Scenario;

fn reference() -> ChannelParams {
    Scenario::reference_passive().channel
}

fn envelopes(k: f64, draws: u64, seed: u64) -> Vec<f64> {
    let mut rng = trial_rng(seed, 0);
    (0..draws).map(|_| sample_rician_envelope(k, &mut rng)).collect()
}

#[test]
fn rayleigh_envelope_mean() {
    let xs = envelopes(0.0, 1_000_000, 21);
    let (mean, _) = mean_variance(&xs);
    let target = std::f64::consts::PI.sqrt() / 2.0;
    assert!((mean / target - 1.0).abs() <= 0.003, "{mean}");
    assert!((rician_mean_envelope(0.0) - target).abs() < 1e-15);
}

#[test]
fn envelope_power_is_unity() {
    for (j, k) in [0.0, 1.0, 10.0].into_iter().enumerate() {
        let xs = envelopes(k, 1_000_000, 22 + j as u64);
        let power = xs.iter().map(|a| a * a).sum::<f64>() / xs.len() as f64;
        assert!((power - 1.0).abs() <= 0.005, "K = {k}: {power}");
        let (mean, _) = mean_variance(&xs);
        assert!((mean / rician_mean_envelope(k) - 1.0).abs() <= 0.003, "K = {k}: {mean}");
    }
}

#[test]
fn line_of_sight_limit_is_deterministic() {
    let xs = envelopes(1e9, 10_000, 25);
    assert!(xs.iter().all(|a| (a - 1.0).abs() <= 1e-4));
}

/// `(V, z0, z1)` draws for the reference hops at `n` elements.
fn cascade_draws(n: usize, trials: u64, seed: u64) -> Vec<(f64, f64, f64)> {
    let p = reference();
    let amp = (p.beta0() * p.beta1()).sqrt();
    map_range(Execution::Parallel, trials, |i| {
        let mut rng = trial_rng(seed, i);
        let (mut v, mut s_big, mut s_small) = (0.0, 0.0, 0.0);
        for _ in 0..n {
            let big = sample_rician_envelope(p.k0, &mut rng);
            let small = sample_rician_envelope(p.k1, &mut rng);
            v += big * small;
            s_big += big * big;
            s_small += small * small;
        }
        (amp * v, p.beta1() * s_small, p.beta0() * s_big)
    })
}

#[test]
fn cascade_moments_match_simulation() {
    for (n, seed) in [(16usize, 31u64), (64, 32)] {
        let m = cascade_moments(&reference(), 0.0, n).unwrap();
        let v: Vec<f64> = cascade_draws(n, 1_000_000, seed).into_iter().map(|d| d.0).collect();
        let (mean, var) = mean_variance(&v);
        assert!((mean / m.mu_v - 1.0).abs() <= 0.005, "N = {n}: mean {mean} vs {}", m.mu_v);
        assert!((var / m.sigma2_v - 1.0).abs() <= 0.02, "N = {n}: var {var} vs {}", m.sigma2_v);
    }
}

#[test]
fn reference_cascade_is_pinned() {
    let m = cascade_moments(&reference(), 0.0, 64).unwrap();
    assert!((m.mu_v / 2.930_830_394_130_232e-6 - 1.0).abs() < 1e-12);
    assert!((m.sigma2_v / 1.271_584_363_978_836e-14 - 1.0).abs() < 1e-12);
}

#[test]
fn power_sums_and_correlation_match_simulation() {
    let s = Scenario::reference_active();
    let n = s.link.n_elements;
    let sums = power_sum_stats(&s.channel, n).unwrap();
    let stats = active_power_stats(&s.channel, &s.link, &s.geometry.t_angles, &s.geometry.r_angles).unwrap();
    let draws = cascade_draws(n, 400_000, 33);

    let z0: Vec<f64> = draws.iter().map(|d| d.1).collect();
    let z1: Vec<f64> = draws.iter().map(|d| d.2).collect();
    let (m0, v0) = mean_variance(&z0);
    let (m1, v1) = mean_variance(&z1);
    assert!((m0 / sums.mu_z0 - 1.0).abs() <= 0.005);
    assert!((m1 / sums.mu_z1 - 1.0).abs() <= 0.005);
    assert!((v0 / sums.sigma2_z0 - 1.0).abs() <= 0.02);
    assert!((v1 / sums.sigma2_z1 - 1.0).abs() <= 0.02);

    // correlation of V with the weighted noise-and-budget sum
    let w: Vec<f64> = draws.iter().map(|d| stats.c1 * d.1 + stats.c2 * d.2).collect();
    let v: Vec<f64> = draws.iter().map(|d| d.0).collect();
    let (mv, vv) = mean_variance(&v);
    let (mw, vw) = mean_variance(&w);
    let cov = v.iter().zip(&w).map(|(a, b)| (a - mv) * (b - mw)).sum::<f64>() / (v.len() as f64 - 1.0);
    let rho = cov / (vv * vw).sqrt();
    assert!((rho - stats.rho).abs() <= 0.01, "rho {} vs empirical {rho}", stats.rho);
    assert!(stats.rho > 0.0 && stats.rho < 1.0);
}
